#include "mkdv/multiplier.hpp"

#include "mkdv/errors.hpp"

#include <cmath>

namespace mkdv {

cplx MultiplierSpec::symbol(double xi, double tau) const
{
    switch (kind) {
    case MultiplierKind::bessel:
        return std::pow(japanese(xi), param);
    case MultiplierKind::riesz:
        if (xi == 0.0) {
            if (param > 0.0 || zero_mode == ZeroModePolicy::drop) return 0.0;
            if (param == 0.0) return 1.0;
            throw DomainError("riesz symbol |xi|^s with s < 0 is singular at xi = 0");
        }
        return std::pow(std::abs(xi), param);
    case MultiplierKind::airy:
        return std::polar(1.0, param * xi * xi * xi);
    case MultiplierKind::lambda:
        return std::pow(japanese(tau - xi * xi * xi), param);
    }
    return 1.0;
}

namespace {

// Riesz with s < 0 and no policy: allowed only if the zero mode is empty.
bool zero_mode_guard(const MultiplierSpec& spec)
{
    return spec.kind == MultiplierKind::riesz && spec.param < 0.0 && spec.zero_mode == ZeroModePolicy::none;
}

}  // namespace

SpectralField apply_multiplier(const SpectralField& u, const MultiplierSpec& spec)
{
    if (u.layout() != Layout1D::frequency) throw LayoutError("multipliers act on frequency-layout fields");
    if (spec.kind == MultiplierKind::lambda) throw LayoutError("lambda(b) needs a (xi, tau) field");
    const Grid1D& g = u.grid();
    std::vector<cplx> out(u.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k == g.zero_index() && zero_mode_guard(spec)) {
            if (u[k] != 0.0)
                throw DomainError("riesz(s < 0) with a populated zero mode needs a zero-mode policy");
            continue;
        }
        out[k] = spec.symbol(g.xi(k)) * u[k];
    }
    return SpectralField(g, std::move(out), Layout1D::frequency);
}

SpaceTimeField apply_multiplier(const SpaceTimeField& u, const MultiplierSpec& spec)
{
    if (u.layout() == Layout2D::physical) throw LayoutError("multipliers act on mixed or frequency layout");
    if (spec.kind == MultiplierKind::lambda && u.layout() != Layout2D::frequency)
        throw LayoutError("lambda(b) needs the (xi, tau) frequency layout");
    const auto& g = u.grid();
    const std::size_t nx = g.space().size();
    std::vector<cplx> out(u.coeffs().begin(), u.coeffs().end());
    std::vector<cplx> sym(nx);
    const bool guard = zero_mode_guard(spec);
    const std::size_t z = g.space().zero_index();
    if (spec.kind != MultiplierKind::lambda)
        for (std::size_t k = 0; k < nx; ++k) sym[k] = (guard && k == z) ? 0.0 : spec.symbol(g.space().xi(k));
    for (std::size_t j = 0; j < g.n_times(); ++j) {
        if (guard && out[j * nx + z] != 0.0)
            throw DomainError("riesz(s < 0) with a populated zero mode needs a zero-mode policy");
        for (std::size_t k = 0; k < nx; ++k) {
            const cplx m = spec.kind == MultiplierKind::lambda ? spec.symbol(g.space().xi(k), g.tau(j)) : sym[k];
            out[j * nx + k] *= m;
        }
    }
    return SpaceTimeField(g, std::move(out), u.layout());
}

SpaceTimeField apply_group(const SpaceTimeField& u, int sign)
{
    if (u.layout() != Layout2D::mixed) throw LayoutError("apply_group needs the mixed (xi, t) layout");
    const auto& g = u.grid();
    const std::size_t nx = g.space().size();
    std::vector<cplx> out(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t j = 0; j < g.n_times(); ++j) {
        const double t = g.t(j) * static_cast<double>(sign);
        for (std::size_t k = 0; k < nx; ++k) {
            const double xi = g.space().xi(k);
            out[j * nx + k] *= std::polar(1.0, t * xi * xi * xi);
        }
    }
    return SpaceTimeField(g, std::move(out), Layout2D::mixed);
}

}  // namespace mkdv
