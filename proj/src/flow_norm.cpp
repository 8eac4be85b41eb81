#include "mkdv/flow_norm.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/multiplier.hpp"
#include "mkdv/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mkdv {

double pow_from_norm(double abs2, double q)
{
    const double h = 0.5 * q;
    if (h == std::floor(h) && h >= 1.0 && h <= 8.0) {
        double r = abs2;
        for (int i = 1; i < static_cast<int>(h); ++i) r *= abs2;
        return r;
    }
    return std::pow(abs2, h);
}

namespace {

struct Scales {
    double band;
    double extent;
    double t_star;
};

Scales scales_of(const Profile1D& u)
{
    const double w = u.min_width();
    const double c = u.max_centre();
    return {u.band(1e-7), u.spatial_extent(1e-7), 1.0 / (w * w * (6.0 * c + 3.0 * w))};
}

double slice(const Profile1D& u, const Scales& sc, double t, const FlowNormOptions& opt, std::size_t& modes)
{
    const double K = sc.band;
    const double spread = 1.5 * K * K * std::abs(t);
    const double L = 1.1 * (spread + sc.extent);
    const double xc = -spread * (t >= 0.0 ? 1.0 : -1.0);
    const auto want = static_cast<std::size_t>(std::ceil(2.6 * K * L / std::numbers::pi * opt.resolution));
    const std::size_t n = nice_size(std::max<std::size_t>(want, 64));
    if (n > opt.max_modes)
        throw ResolutionError("flow norm needs " + std::to_string(n) + " modes at t = " + std::to_string(t) +
                              ", above the cap of " + std::to_string(opt.max_modes));
    modes = std::max(modes, n);
    const Grid1D g(L, n);
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = g.xi(k);
        double w = 1.0;
        if (opt.sigma != 0.0) {
            if (opt.homogeneous) {
                if (xi == 0.0) continue;
                w = std::pow(std::abs(xi), opt.sigma);
            } else {
                w = std::pow(japanese(xi), opt.sigma);
            }
        }
        // translate by xc so the packet sits in the middle of the window
        v[k] = w * u.value(xi) * std::polar(1.0, t * xi * xi * xi + xi * xc);
    }
    const auto phys = centered_inverse(v, g.dx(), -L);
    double acc = 0.0;
    if (std::isinf(opt.q)) {
        for (const auto& z : phys) acc = std::max(acc, std::abs(z));
        return acc;
    }
    for (const auto& z : phys) acc += pow_from_norm(std::norm(z), opt.q);
    return std::pow(acc * g.dx(), 1.0 / opt.q);
}

// Composite Simpson on n (even) uniform intervals.
double simpson(const std::vector<double>& f, double h)
{
    const std::size_t n = f.size() - 1;
    double acc = f.front() + f.back();
    for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0;
}

}  // namespace

double flow_slice_norm(const Profile1D& u, double t, const FlowNormOptions& opt, std::size_t* modes)
{
    std::size_t m = 0;
    const double v = slice(u, scales_of(u), t, opt, m);
    if (modes) *modes = m;
    return v;
}

FlowNormResult flow_norm(const Profile1D& u, const FlowNormOptions& opt)
{
    if (u.atoms.empty()) throw ParameterError("flow_norm needs a nonempty profile");
    if (!(opt.p >= 1.0) || !(opt.q >= 1.0)) throw ParameterError("flow norm exponents must be >= 1");
    if (std::isinf(opt.p)) throw ParameterError("flow_norm integrates in time; p must be finite");
    const Scales sc = scales_of(u);
    const double t1 = sc.t_star;
    const double T = opt.horizon * sc.t_star;
    std::size_t modes = 0;
    std::size_t count = 0;
    auto f = [&](double t) {
        ++count;
        return std::pow(slice(u, sc, t, opt, modes), opt.p);
    };

    // inner mesh on [-t1, t1], fine enough for beats at frequency ~ K^3
    const double K = sc.band;
    auto n0 = static_cast<std::size_t>(std::ceil(std::max(64.0, 8.0 * t1 * K * K * K) * opt.resolution));
    n0 += n0 % 2;
    std::vector<double> inner(n0 + 1);
    const double h0 = 2.0 * t1 / static_cast<double>(n0);
    for (std::size_t i = 0; i <= n0; ++i) inner[i] = f(-t1 + static_cast<double>(i) * h0);
    double direct = simpson(inner, h0);

    // outer meshes in s = ln|t|
    const double ds0 = 0.05 / opt.resolution;
    auto m = static_cast<std::size_t>(std::ceil(std::log(T / t1) / ds0));
    m += m % 2;
    const double ds = std::log(T / t1) / static_cast<double>(m);
    double tail = 0.0;
    double exponent_sum = 0.0;
    for (double sign : {-1.0, 1.0}) {
        std::vector<double> g(m + 1);
        std::vector<double> raw(m + 1);
        for (std::size_t i = 0; i <= m; ++i) {
            const double t = t1 * std::exp(static_cast<double>(i) * ds);
            raw[i] = f(sign * t);
            g[i] = raw[i] * t;
        }
        direct += simpson(g, ds);
        // least-squares slope of log f vs log t over the last fifth of the mesh
        const std::size_t first = m - std::max<std::size_t>(m / 5, 4);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double cnt = 0;
        for (std::size_t i = first; i <= m; ++i) {
            if (!(raw[i] > 0.0)) continue;
            const double x = static_cast<double>(i) * ds;
            const double y = std::log(raw[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y; cnt += 1;
        }
        double a = cnt > 2 ? -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
        if (!(a > 1.05)) {
            const double theory = opt.p * (0.5 - 1.0 / opt.q);
            if (!(theory > 1.0)) throw NumericalError("flow norm tail does not decay integrably");
            a = theory;
        }
        exponent_sum += a;
        tail += raw[m] * T / (a - 1.0);
    }
    FlowNormResult r{};
    r.direct = direct;
    r.tail = tail;
    r.tail_fraction = tail / (direct + tail);
    r.value = std::pow(direct + tail, 1.0 / opt.p);
    r.t_direct = T;
    r.decay_exponent = 0.5 * exponent_sum;
    r.max_modes_used = modes;
    r.time_samples = count;
    return r;
}

}  // namespace mkdv
