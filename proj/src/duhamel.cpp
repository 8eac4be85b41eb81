#include "mkdv/duhamel.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/multiplier.hpp"

#include <algorithm>
#include <cmath>

namespace mkdv {

std::vector<cplx> cumulative_trapezoid(std::span<const cplx> g, double dt, std::size_t origin)
{
    const std::size_t n = g.size();
    if (origin >= n) throw ParameterError("cumulative_trapezoid: origin outside the samples");
    std::vector<cplx> out(n);
    for (std::size_t j = origin + 1; j < n; ++j) out[j] = out[j - 1] + 0.5 * dt * (g[j - 1] + g[j]);
    for (std::size_t j = origin; j-- > 0;) out[j] = out[j + 1] - 0.5 * dt * (g[j] + g[j + 1]);
    return out;
}

std::vector<cplx> cumulative_cubic(std::span<const cplx> g, double dt, std::size_t origin)
{
    const std::size_t n = g.size();
    if (origin >= n) throw ParameterError("cumulative_cubic: origin outside the samples");
    if (n < 4) throw ParameterError("cumulative_cubic needs at least 4 samples");
    const double c = dt / 24.0;
    // integral over [t_j, t_{j+1}]
    auto step = [&](std::size_t j) -> cplx {
        if (j == 0) return c * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
        if (j + 2 == n) return c * (g[j - 2] - 5.0 * g[j - 1] + 19.0 * g[j] + 9.0 * g[j + 1]);
        return c * (-g[j - 1] + 13.0 * g[j] + 13.0 * g[j + 1] - g[j + 2]);
    };
    std::vector<cplx> out(n);
    for (std::size_t j = origin + 1; j < n; ++j) out[j] = out[j - 1] + step(j - 1);
    for (std::size_t j = origin; j-- > 0;) out[j] = out[j + 1] - step(j);
    return out;
}

std::size_t origin_index(const SpaceTimeGrid& g)
{
    const double pos = -g.t_lo() / g.dt();
    const double idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-9 * std::max(1.0, std::abs(pos)) || idx < 0.0 ||
        idx >= static_cast<double>(g.n_times()))
        throw ParameterError("duhamel_integral: t = 0 is not a sample of the time grid");
    return static_cast<std::size_t>(idx);
}

DuhamelResult duhamel_integral(const SpaceTimeField& F, double tolerance, DuhamelRule rule)
{
    if (F.layout() != Layout2D::mixed) throw LayoutError("duhamel_integral needs the mixed (xi, t) layout");
    const auto& grid = F.grid();
    const std::size_t nt = grid.n_times();
    const std::size_t nx = grid.space().size();
    const std::size_t i0 = origin_index(grid);
    const double dt = grid.dt();

    // interaction picture: g(t') = U(-t') F(t'), so v(t) = U(t) int_0^t g
    const SpaceTimeField g = apply_group(F, -1);
    const auto primitive = rule == DuhamelRule::cubic ? cumulative_cubic : cumulative_trapezoid;
    const double richardson = rule == DuhamelRule::cubic ? 15.0 : 3.0;
    std::vector<cplx> G(nt * nx);
    std::vector<cplx> col(nt);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < nx; ++k) {
        for (std::size_t j = 0; j < nt; ++j) col[j] = g.at(j, k);
        const auto fine = primitive(col, dt, i0);
        // same primitive with step 2 dt on the samples of the origin's parity
        std::vector<cplx> coarse_in;
        const std::size_t first = i0 % 2;
        for (std::size_t j = first; j < nt; j += 2) coarse_in.push_back(col[j]);
        const auto coarse = primitive(coarse_in, 2.0 * dt, (i0 - first) / 2);
        for (std::size_t m = 0; m < coarse.size(); ++m)
            err = std::max(err, std::abs(fine[first + 2 * m] - coarse[m]) / richardson);
        for (std::size_t j = 0; j < nt; ++j) {
            G[j * nx + k] = fine[j];
            scale = std::max(scale, std::abs(fine[j]));
        }
    }
    SpaceTimeField v = apply_group(SpaceTimeField(grid, std::move(G), Layout2D::mixed), +1);
    const double rel = scale > 0.0 ? err / scale : 0.0;
    DuhamelResult res{std::move(v), rel, rel > tolerance, {}};
    if (res.resolution_warning)
        res.note = "time grid too coarse: estimated trapezoid error " + std::to_string(rel) +
                   " exceeds tolerance " + std::to_string(tolerance);
    return res;
}

}  // namespace mkdv
