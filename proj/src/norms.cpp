#include "mkdv/norms.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/multiplier.hpp"
#include "mkdv/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mkdv {

NormParams::NormParams(Rational r_, double s_, double b_) : r(r_), s(s_), b(b_)
{
    if (r <= Rational(1) || r > Rational(2)) throw ParameterError("norm exponent r must lie in (1, 2]");
}

double conjugate_exponent(double r)
{
    if (!(r > 1.0)) throw ParameterError("exponent r must exceed 1 (r = 1 is the separate sup norm)");
    if (std::isinf(r)) return 1.0;
    return r / (r - 1.0);
}

double weighted_lp(std::span<const double> a, double weight, double p)
{
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : a) m = std::max(m, v);
        return m;
    }
    // scale by the max to avoid under/overflow in |v|^p
    double m = 0.0;
    for (double v : a) m = std::max(m, v);
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    if (p == 2.0) {
        for (double v : a) acc += (v / m) * (v / m);
        return m * std::sqrt(weight * acc);
    }
    for (double v : a) acc += std::pow(v / m, p);
    return m * std::pow(weight * acc, 1.0 / p);
}

double fl_norm(const SpectralField& u, double r, double s)
{
    if (u.layout() != Layout1D::frequency) throw LayoutError("fl_norm needs a frequency-layout field");
    const double rp = conjugate_exponent(r);
    const Grid1D& g = u.grid();
    std::vector<double> a(u.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::pow(japanese(g.xi(k)), s) * std::abs(u[k]);
    return weighted_lp(a, g.dxi(), rp);
}

double fl_norm(const SpectralField& u, const NormParams& p) { return fl_norm(u, p.rv(), p.s); }

double fl_sup_norm(const SpectralField& u, double s)
{
    if (u.layout() != Layout1D::frequency) throw LayoutError("fl_sup_norm needs a frequency-layout field");
    double m = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        m = std::max(m, std::pow(japanese(u.grid().xi(k)), s) * std::abs(u[k]));
    return m;
}

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 4> gl_x{0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> gl_w{0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// int_a^b <x>^beta (c0 + c1 x) dx for 0 <= a < b, via x = sinh v in pieces of
// length <= 0.5 in v (the weight is smooth in v even across |x| ~ 1).
double graded_integral(double a, double b, double beta, double c0, double c1)
{
    const double va = std::asinh(a), vb = std::asinh(b);
    if (!(vb > va)) return 0.0;
    const auto n = static_cast<int>(std::ceil((vb - va) / 0.5));
    const double len = (vb - va) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mid = va + (i + 0.5) * len;
        for (std::size_t q = 0; q < gl_x.size(); ++q)
            for (double sgn : {-1.0, 1.0}) {
                const double v = mid + sgn * 0.5 * len * gl_x[q];
                const double x = std::sinh(v), c = std::cosh(v);
                acc += gl_w[q] * 0.5 * len * std::pow(c, beta + 1.0) * (c0 + c1 * x);
            }
    }
    return acc;
}

// int over [lo, hi] (any signs) of <x>^beta (c0 + c1 x)
double signed_integral(double lo, double hi, double beta, double c0, double c1)
{
    if (hi <= lo) return 0.0;
    if (lo >= 0.0) return graded_integral(lo, hi, beta, c0, c1);
    if (hi <= 0.0) return graded_integral(-hi, -lo, beta, c0, -c1);
    return graded_integral(0.0, hi, beta, c0, c1) + graded_integral(0.0, -lo, beta, c0, -c1);
}

double space_time_norm(const SpaceTimeField& F, double r, double s, double b, bool dispersive)
{
    if (F.layout() != Layout2D::frequency) throw LayoutError("space-time norms need the (xi, tau) layout");
    const double rp = conjugate_exponent(r);
    const auto& g = F.grid();
    const std::size_t nx = g.space().size();
    const double h = g.dtau();
    std::vector<double> ws(nx);
    for (std::size_t k = 0; k < nx; ++k) ws[k] = std::pow(japanese(g.space().xi(k)), s);
    std::vector<double> a(g.points());
    for (std::size_t j = 0; j < g.n_times(); ++j) {
        const double tau = g.tau(j);
        for (std::size_t k = 0; k < nx; ++k) {
            const double z = std::abs(F.at(j, k));
            if (z == 0.0) continue;
            const double xi = g.space().xi(k);
            const double sig = dispersive ? tau - xi * xi * xi : tau;
            a[j * nx + k] = ws[k] * std::pow(modulation_weight(sig, h, b * rp), 1.0 / rp) * z;
        }
    }
    return weighted_lp(a, g.space().dxi() * h, rp);
}

}  // namespace

double modulation_weight(double sigma, double h, double beta)
{
    if (beta == 0.0) return 1.0;
    const double s2 = sigma * sigma;
    if (h <= 0.2 * std::sqrt(1.0 + s2)) {
        // hat average = w + h^2 w'' / 12 + O(h^4)
        const double d = beta * sigma / (1.0 + s2);
        const double curv = d * d + beta * (1.0 - s2) / ((1.0 + s2) * (1.0 + s2));
        return std::pow(1.0 + s2, 0.5 * beta) * (1.0 + h * h * curv / 12.0);
    }
    // (1/h) int hat(x - sigma) <x>^beta dx, hat linear on each half
    const double up = signed_integral(sigma - h, sigma, beta, (h - sigma) / h, 1.0 / h);
    const double down = signed_integral(sigma, sigma + h, beta, (h + sigma) / h, -1.0 / h);
    return (up + down) / h;
}

double hrsb_norm(const SpaceTimeField& F, double r, double s, double b)
{
    return space_time_norm(F, r, s, b, false);
}

double xrsb_norm(const SpaceTimeField& F, double r, double s, double b)
{
    return space_time_norm(F, r, s, b, true);
}

double xrsb_norm(const SpaceTimeField& F, const NormParams& p) { return xrsb_norm(F, p.rv(), p.s, p.b); }

double xrsb_norm_mixed(const SpaceTimeField& u, double r, double s, double b, std::size_t pad)
{
    if (u.layout() != Layout2D::mixed) throw LayoutError("xrsb_norm_mixed needs the mixed (xi, t) layout");
    if (pad == 0) throw ParameterError("pad must be >= 1");
    SpaceTimeField g = apply_group(u, -1);
    if (pad > 1) {
        const auto& gr = u.grid();
        const std::size_t nt = gr.n_times();
        const std::size_t nx = gr.space().size();
        const std::size_t before = (pad - 1) * nt / 2;
        const double span = gr.span() * static_cast<double>(pad);
        const double t_lo = gr.t_lo() - static_cast<double>(before) * gr.dt();
        SpaceTimeGrid big(gr.space(), nt * pad, t_lo, t_lo + span);
        std::vector<cplx> a(big.points());
        std::copy(g.coeffs().begin(), g.coeffs().end(), a.begin() + static_cast<long>(before * nx));
        g = SpaceTimeField(big, std::move(a), Layout2D::mixed);
    }
    return hrsb_norm(time_to_frequency(g), r, s, b);
}

double mixed_norm(const SpaceTimeField& u, const MixedNormParams& p)
{
    if (!(p.p >= 1.0) || !(p.q >= 1.0)) throw ParameterError("mixed norm exponents must be >= 1");
    SpaceTimeField phys = u;
    if (u.layout() == Layout2D::frequency) throw LayoutError("mixed_norm needs physical or mixed layout");
    if (p.sigma != 0.0) {
        SpaceTimeField m = u.layout() == Layout2D::mixed ? u : space_to_frequency(u);
        const auto spec = p.homogeneous ? MultiplierSpec::riesz(p.sigma) : MultiplierSpec::bessel(p.sigma);
        phys = space_to_physical(apply_multiplier(m, spec));
    } else if (u.layout() == Layout2D::mixed) {
        phys = space_to_physical(u);
    }
    const auto& g = phys.grid();
    const std::size_t nx = g.space().size();
    std::vector<double> row(nx);
    std::vector<double> per_t(g.n_times());
    for (std::size_t j = 0; j < g.n_times(); ++j) {
        for (std::size_t k = 0; k < nx; ++k) row[k] = std::abs(phys.at(j, k));
        per_t[j] = weighted_lp(row, g.space().dx(), p.q);
    }
    return weighted_lp(per_t, g.dt(), p.p);
}

Rational scale_exponent(const Rational& r)
{
    if (r <= Rational(4, 3) || r > Rational(2)) throw RangeError("r must satisfy 2 >= r > 4/3");
    return Rational(1, 2) - Rational(1) / (Rational(2) * r);
}

double scale_exponent(double r)
{
    if (!(r > 4.0 / 3.0) || r > 2.0) throw RangeError("r must satisfy 2 >= r > 4/3");
    return 0.5 - 0.5 / r;
}

}  // namespace mkdv
