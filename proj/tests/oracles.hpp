#pragma once

// Independent reference computations for the tests and the acceptance run.
// Nothing here calls into the library's transforms or norms.

#include "mkdv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// out_k = (2 pi)^{-1/2} step sum_j v_j e^{-i w_k x_j} by direct summation.
inline std::vector<cplx> direct_transform(const std::vector<cplx>& v, double step, double origin)
{
    const std::size_t n = v.size();
    const double dw = 2.0 * pi / (static_cast<double>(n) * step);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (static_cast<double>(k) - static_cast<double>(n / 2)) * dw;
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += v[j] * std::polar(1.0, -w * (origin + static_cast<double>(j) * step));
        out[k] = acc * step / std::sqrt(2.0 * pi);
    }
    return out;
}

// G(t) = int dxi |F(xi, t)|^2 with, by Plancherel in x,
//   F(xi, t) = (2 pi)^{-1/2} int dxi1 |xi|^{1/2} |2 xi1 - xi|^{1/2} e^{it(xi1^3 + xi2^3)} u1^(xi1) u2^(xi2),
// xi2 = xi - xi1, for single Gaussian atoms: the squared L^2_x norm at time t of
// I^{1/2} I_-^{1/2}(U u1, U u2). Plain trapezoid sums over the atoms' 8-width supports,
// with steps fine enough for the phase at time t.
class BilinearSlice {
public:
    BilinearSlice(const mkdv::FrequencyAtom& a1, const mkdv::FrequencyAtom& a2) : a1_(a1), a2_(a2)
    {
        lo1_ = a1.centre - reach * a1.width;
        hi1_ = a1.centre + reach * a1.width;
        lo2_ = a2.centre - reach * a2.width;
        hi2_ = a2.centre + reach * a2.width;
        wmin_ = std::min(a1.width, a2.width);
        kmax_ = std::max({std::abs(lo1_), std::abs(hi1_), std::abs(lo2_), std::abs(hi2_)});
        // G(t) is a superposition of e^{it(Phi(xi1) - Phi(eta1))}, Phi = xi1^3 + xi2^3 = xi^3 - 3 xi xi1 xi2
        const double prods[] = {lo1_ * lo2_, lo1_ * hi2_, hi1_ * lo2_, hi1_ * hi2_};
        const double prange = *std::max_element(prods, prods + 4) - *std::min_element(prods, prods + 4);
        band_ = 3.0 * std::max(std::abs(lo1_ + lo2_), std::abs(hi1_ + hi2_)) * prange;
    }

    // bandwidth of G in t
    double band() const { return band_; }

    double operator()(double t) const
    {
        // spatial reach of the product wave at time t sets the xi steps
        const double extent = 3.0 * kmax_ * kmax_ * std::abs(t) + 16.0 / wmin_;
        const double h = pi / extent;
        const auto n1 = static_cast<std::size_t>(std::ceil((hi1_ - lo1_) / h));
        const double h1 = (hi1_ - lo1_) / static_cast<double>(n1);
        const double xlo = lo1_ + lo2_, xhi = hi1_ + hi2_;
        const auto nx = static_cast<std::size_t>(std::ceil((xhi - xlo) / h));
        const double hx = (xhi - xlo) / static_cast<double>(nx);
        double sum = 0.0;
        for (std::size_t i = 0; i <= nx; ++i) {
            const double xi = xlo + static_cast<double>(i) * hx;
            cplx F = 0.0;
            for (std::size_t m = 0; m <= n1; ++m) {
                const double x1 = lo1_ + static_cast<double>(m) * h1;
                const double x2 = xi - x1;
                if (x2 < lo2_ || x2 > hi2_) continue;
                const double amp =
                    std::sqrt(std::abs(2.0 * x1 - xi)) *
                    std::exp(-0.5 * ((x1 - a1_.centre) * (x1 - a1_.centre) / (a1_.width * a1_.width) +
                                     (x2 - a2_.centre) * (x2 - a2_.centre) / (a2_.width * a2_.width)));
                F += amp * std::polar(1.0, t * (x1 * x1 * x1 + x2 * x2 * x2));
            }
            F *= h1 * std::sqrt(std::abs(xi)) / std::sqrt(2.0 * pi);
            sum += std::norm(F) * hx;
        }
        return sum * std::norm(a1_.amplitude) * std::norm(a2_.amplitude);
    }

private:
    static constexpr double reach = 8.0;
    mkdv::FrequencyAtom a1_, a2_;
    double lo1_, hi1_, lo2_, hi2_, wmin_, kmax_, band_;
};

struct BruteForce {
    double value;     // int dt G(t)
    double horizon;   // T at which the time integral was stopped
    double last_gain; // relative contribution of the final doubling
};

// ||I^{1/2} I_-^{1/2}(U u1, U u2)||^2_{L^2_{xt}} = int G(t) dt. G is even in t for
// single atoms (the phase flips sign, the Gaussians are real up to constant
// amplitudes), so only t >= 0 is summed, with step pi / band (half the
// Poisson-summation limit). T doubles until the added slab contributes less
// than `gain_tol` of the total.
inline BruteForce bilinear_brute_force(const mkdv::FrequencyAtom& a1, const mkdv::FrequencyAtom& a2,
                                       double gain_tol = 1e-4)
{
    const BilinearSlice G(a1, a2);
    const double dt = pi / G.band();
    auto steps = [&](double t) { return static_cast<std::size_t>(std::ceil(t / dt)); };
    auto slab = [&](std::size_t j0, std::size_t j1) {
        double s = 0.0;
        for (std::size_t j = j0; j < j1; ++j) s += (j == 0 ? 0.5 : 1.0) * dt * G(static_cast<double>(j) * dt);
        return s;
    };
    double T = 1.0;
    double total = slab(0, steps(T));
    double gain = 1.0;
    while (T < 1024.0) {
        const double add = slab(steps(T), steps(2.0 * T));
        total += add;
        T *= 2.0;
        gain = add / total;
        if (gain < gain_tol) break;
    }
    return {2.0 * total, T, gain};
}

// int |h(t)|^2 G(t) dt for a time envelope h of bounded support [t_lo, t_hi].
template <class Envelope>
double enveloped_bilinear(const mkdv::FrequencyAtom& a1, const mkdv::FrequencyAtom& a2, Envelope h2, double t_lo,
                          double t_hi)
{
    const BilinearSlice G(a1, a2);
    const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) * G.band() / pi));
    const double dt = (t_hi - t_lo) / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double t = t_lo + static_cast<double>(j) * dt;
        s += (j == 0 || j == n ? 0.5 : 1.0) * dt * h2(t) * G(t);
    }
    return s;
}

// Space-time derivatives of the kink sqrt(2) k tanh(k (x + 2 k^2 t)) by
// centred finite differences of the closed form, step h.
inline double kink_fd_residual(double k, double x, double t, double h)
{
    auto u = [k](double x_, double t_) { return std::sqrt(2.0) * k * std::tanh(k * (x_ + 2.0 * k * k * t_)); };
    const double ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
    const double uxxx = (u(x + 2 * h, t) - 2 * u(x + h, t) + 2 * u(x - h, t) - u(x - 2 * h, t)) / (2 * h * h * h);
    auto cube = [&](double x_) { const double v = u(x_, t); return v * v * v; };
    const double cx = (cube(x + h) - cube(x - h)) / (2.0 * h);
    return ut + uxxx - cx;
}

}  // namespace oracle
