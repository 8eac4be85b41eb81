#include "mkdv/transform.hpp"

#include "mkdv/errors.hpp"

#include <cmath>
#include <numbers>

namespace mkdv {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double dual_step(std::size_t n, double step)
{
    return 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
}

void forward_inplace(std::span<cplx> v, double step, double origin)
{
    const std::size_t n = v.size();
    fft_inplace(v, FftDirection::forward);
    const double dw = dual_step(n, step);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long m = static_cast<long>(k) - static_cast<long>(n / 2);
        const std::size_t src = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
        const double w = static_cast<double>(m) * dw;
        out[k] = inv_sqrt_2pi * step * std::polar(1.0, -w * origin) * v[src];
    }
    std::copy(out.begin(), out.end(), v.begin());
}

void inverse_inplace(std::span<cplx> v, double step, double origin)
{
    const std::size_t n = v.size();
    const double dw = dual_step(n, step);
    std::vector<cplx> buf(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long m = static_cast<long>(k) - static_cast<long>(n / 2);
        const std::size_t dst = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
        const double w = static_cast<double>(m) * dw;
        buf[dst] = v[k] * std::polar(1.0, w * origin);
    }
    fft_inplace(buf, FftDirection::backward);
    for (std::size_t j = 0; j < n; ++j) v[j] = inv_sqrt_2pi * dw * buf[j];
}

// Apply fn to every column (fixed space index) of a row-major n_t x n_x array.
template <class Fn>
void for_each_column(std::vector<cplx>& a, std::size_t nt, std::size_t nx, Fn fn)
{
    std::vector<cplx> col(nt);
    for (std::size_t k = 0; k < nx; ++k) {
        for (std::size_t j = 0; j < nt; ++j) col[j] = a[j * nx + k];
        fn(std::span<cplx>(col));
        for (std::size_t j = 0; j < nt; ++j) a[j * nx + k] = col[j];
    }
}

void require_layout(const SpaceTimeField& u, Layout2D expected, const char* op)
{
    if (u.layout() != expected) throw LayoutError(std::string(op) + ": input has the wrong layout");
}

}  // namespace

std::vector<cplx> centered_forward(std::span<const cplx> samples, double step, double origin)
{
    std::vector<cplx> v(samples.begin(), samples.end());
    forward_inplace(v, step, origin);
    return v;
}

std::vector<cplx> centered_inverse(std::span<const cplx> coeffs, double step, double origin)
{
    std::vector<cplx> v(coeffs.begin(), coeffs.end());
    inverse_inplace(v, step, origin);
    return v;
}

SpectralField to_frequency(const SpectralField& u)
{
    if (u.layout() != Layout1D::physical) throw LayoutError("to_frequency: field is not in physical layout");
    const Grid1D& g = u.grid();
    return SpectralField(g, centered_forward(u.coeffs(), g.dx(), -g.half_length()), Layout1D::frequency);
}

SpectralField to_physical(const SpectralField& u)
{
    if (u.layout() != Layout1D::frequency) throw LayoutError("to_physical: field is not in frequency layout");
    const Grid1D& g = u.grid();
    return SpectralField(g, centered_inverse(u.coeffs(), g.dx(), -g.half_length()), Layout1D::physical);
}

SpaceTimeField space_to_frequency(const SpaceTimeField& u)
{
    require_layout(u, Layout2D::physical, "space_to_frequency");
    const auto& g = u.grid();
    const std::size_t nx = g.space().size();
    std::vector<cplx> a(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t j = 0; j < g.n_times(); ++j)
        forward_inplace(std::span<cplx>(a).subspan(j * nx, nx), g.space().dx(), -g.space().half_length());
    return SpaceTimeField(g, std::move(a), Layout2D::mixed);
}

SpaceTimeField space_to_physical(const SpaceTimeField& u)
{
    require_layout(u, Layout2D::mixed, "space_to_physical");
    const auto& g = u.grid();
    const std::size_t nx = g.space().size();
    std::vector<cplx> a(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t j = 0; j < g.n_times(); ++j)
        inverse_inplace(std::span<cplx>(a).subspan(j * nx, nx), g.space().dx(), -g.space().half_length());
    return SpaceTimeField(g, std::move(a), Layout2D::physical);
}

SpaceTimeField time_to_frequency(const SpaceTimeField& u)
{
    require_layout(u, Layout2D::mixed, "time_to_frequency");
    const auto& g = u.grid();
    std::vector<cplx> a(u.coeffs().begin(), u.coeffs().end());
    for_each_column(a, g.n_times(), g.space().size(),
                    [&](std::span<cplx> c) { forward_inplace(c, g.dt(), g.t_lo()); });
    return SpaceTimeField(g, std::move(a), Layout2D::frequency);
}

SpaceTimeField time_to_physical(const SpaceTimeField& u)
{
    require_layout(u, Layout2D::frequency, "time_to_physical");
    const auto& g = u.grid();
    std::vector<cplx> a(u.coeffs().begin(), u.coeffs().end());
    for_each_column(a, g.n_times(), g.space().size(),
                    [&](std::span<cplx> c) { inverse_inplace(c, g.dt(), g.t_lo()); });
    return SpaceTimeField(g, std::move(a), Layout2D::mixed);
}

SpaceTimeField to_frequency(const SpaceTimeField& u)
{
    require_layout(u, Layout2D::physical, "to_frequency");
    return time_to_frequency(space_to_frequency(u));
}

SpaceTimeField to_physical(const SpaceTimeField& u)
{
    require_layout(u, Layout2D::frequency, "to_physical");
    return space_to_physical(time_to_physical(u));
}

SpectralField time_slice(const SpaceTimeField& u, std::size_t j)
{
    require_layout(u, Layout2D::mixed, "time_slice");
    auto row = u.row(j);
    return SpectralField(u.grid().space(), std::vector<cplx>(row.begin(), row.end()), Layout1D::frequency);
}

}  // namespace mkdv
