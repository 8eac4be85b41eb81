#include "oracles.hpp"

#include "mkdv/cutoff.hpp"
#include "mkdv/duhamel.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/multiplier.hpp"
#include "mkdv/norms.hpp"
#include "mkdv/profile.hpp"
#include "mkdv/transform.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mkdv;

namespace {

std::vector<cplx> random_samples(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> v(n);
    for (auto& z : v) z = {d(rng), d(rng)};
    return v;
}

double max_gap(std::span<const cplx> a, std::span<const cplx> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("centred transform matches direct summation")
{
    for (std::size_t n : {8u, 30u, 64u}) {
        const auto v = random_samples(n, n);
        const double step = 0.37, origin = -1.3;
        const auto fast = centered_forward(v, step, origin);
        const auto slow = oracle::direct_transform(v, step, origin);
        CHECK(max_gap(fast, slow) < 1e-12 * static_cast<double>(n));
    }
}

TEST_CASE("round trip and Plancherel")
{
    const Grid1D g(10.0, 128);
    const SpectralField u(g, random_samples(128, 3), Layout1D::physical);
    const SpectralField f = to_frequency(u);
    const SpectralField back = to_physical(f);
    CHECK(max_gap(back.coeffs(), u.coeffs()) < 1e-12);
    double phys = 0.0;
    for (const cplx& z : u.coeffs()) phys += std::norm(z) * g.dx();
    CHECK(fl_norm(f, 2.0, 0.0) == doctest::Approx(std::sqrt(phys)).epsilon(1e-12));
}

TEST_CASE("Gaussian atom transforms to its closed form")
{
    const FrequencyAtom a{0.7, 0.8, cplx(0.6, -0.3)};
    const Grid1D g(40.0, 512);
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.physical(g.x(j));
    const SpectralField f = to_frequency(SpectralField(g, v, Layout1D::physical));
    double gap = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) gap = std::max(gap, std::abs(f[k] - a.value(g.xi(k))));
    CHECK(gap < 1e-12);
}

TEST_CASE("multipliers")
{
    const Grid1D g(10.0, 64);
    Profile1D p{{{0.8, 0.5, 1.0}}};
    const SpectralField u = p.sample(g, true);
    SUBCASE("Bessel potentials compose to the identity")
    {
        const auto v = apply_multiplier(apply_multiplier(u, MultiplierSpec::bessel(0.7)), MultiplierSpec::bessel(-0.7));
        CHECK(max_gap(v.coeffs(), u.coeffs()) < 1e-13);
    }
    SUBCASE("Airy group is unitary and a group")
    {
        const auto a = apply_multiplier(u, MultiplierSpec::airy(0.4));
        const auto b = apply_multiplier(apply_multiplier(u, MultiplierSpec::airy(0.1)), MultiplierSpec::airy(0.3));
        CHECK(max_gap(a.coeffs(), b.coeffs()) < 1e-13);
        CHECK(fl_norm(a, 2.0, 0.0) == doctest::Approx(fl_norm(u, 2.0, 0.0)).epsilon(1e-13));
    }
    SUBCASE("negative Riesz power needs a zero-mode policy")
    {
        CHECK_THROWS_AS(apply_multiplier(u, MultiplierSpec::riesz(-0.5)), DomainError);
        const auto v = apply_multiplier(u, MultiplierSpec::riesz(-0.5, ZeroModePolicy::drop));
        CHECK(v[g.zero_index()] == cplx(0.0));
        CHECK(std::abs(v[g.zero_index() + 3]) ==
              doctest::Approx(std::abs(u[g.zero_index() + 3]) * std::pow(3 * g.dxi(), -0.5)));
    }
}

TEST_CASE("cumulative cubic rule integrates cubics exactly")
{
    const double dt = 0.1;
    const std::size_t n = 21, origin = 7;
    std::vector<cplx> g(n);
    auto t = [&](std::size_t j) { return (static_cast<double>(j) - static_cast<double>(origin)) * dt; };
    for (std::size_t j = 0; j < n; ++j) g[j] = 1.0 - 2.0 * t(j) + 3.0 * t(j) * t(j) - 4.0 * std::pow(t(j), 3);
    const auto G = cumulative_cubic(g, dt, origin);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = t(j);
        CHECK(std::abs(G[j] - (x - x * x + x * x * x - std::pow(x, 4))) < 1e-13);
    }
}

TEST_CASE("Duhamel integral of U(t) f g(t) is U(t) f G(t), fourth order")
{
    // F(t) = U(t) f cos t  ->  v(t) = U(t) f sin t
    const Grid1D g(8.0, 32);
    const Profile1D p{{{0.6, 0.5, 1.0}}};
    const SpectralField f = p.sample(g, true);
    auto error = [&](std::size_t nt) {
        const SpaceTimeGrid st(g, nt, -1.0, 1.0);
        std::vector<cplx> F(st.points()), want(st.points());
        for (std::size_t j = 0; j < nt; ++j)
            for (std::size_t k = 0; k < g.size(); ++k) {
                const cplx ph = std::polar(1.0, st.t(j) * std::pow(g.xi(k), 3));
                F[j * g.size() + k] = ph * f[k] * std::cos(st.t(j));
                want[j * g.size() + k] = ph * f[k] * std::sin(st.t(j));
            }
        const auto res = duhamel_integral(SpaceTimeField(st, F, Layout2D::mixed), 1e-8, DuhamelRule::cubic);
        return max_gap(res.value.coeffs(), want);
    };
    const double e1 = error(64), e2 = error(128);
    CHECK(e2 < 1e-6);
    CHECK(e1 / e2 > 12.0);
}

TEST_CASE("modulation weight")
{
    // tends to <sigma>^beta on fine lattices, integrates constants exactly
    CHECK(modulation_weight(3.0, 1e-4, 0.7) == doctest::Approx(std::pow(japanese(3.0), 0.7)).epsilon(1e-8));
    CHECK(modulation_weight(-2.0, 5.0, 0.0) == doctest::Approx(1.0));
    // beta = 2: (1/h) int hat(x) (1 + x^2) = 1 + sigma^2 + h^2 / 6
    CHECK(modulation_weight(0.5, 2.0, 2.0) == doctest::Approx(1.0 + 0.25 + 4.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("exponents")
{
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
    CHECK(conjugate_exponent(1.5) == doctest::Approx(3.0));
    CHECK(conjugate_exponent(infinity) == doctest::Approx(1.0));
    CHECK_THROWS_AS(conjugate_exponent(1.0), ParameterError);
    CHECK(scale_exponent(Rational(2)) == Rational(1, 4));
    CHECK(scale_exponent(Rational(3, 2)) == Rational(1, 6));
    CHECK_THROWS_AS(scale_exponent(Rational(6, 5)), RangeError);
    const std::vector<double> v{3.0, 4.0};
    CHECK(weighted_lp(v, 1.0, 2.0) == doctest::Approx(5.0));
    CHECK(weighted_lp(v, 1.0, infinity) == doctest::Approx(4.0));
}

TEST_CASE("Fourier-Lebesgue norm against a closed form")
{
    // ||e^{-xi^2/2}||_{L^{r'}} = (2 pi / r')^{1/(2r')}
    const Grid1D g(60.0, 1024);
    const SpectralField u = Profile1D{{{0.0, 1.0, 1.0}}}.sample(g, true);
    for (double r : {2.0, 1.5, 1.25}) {
        const double rp = r / (r - 1);
        CHECK(fl_norm(u, r, 0.0) == doctest::Approx(std::pow(2 * oracle::pi / rp, 1 / (2 * rp))).epsilon(1e-10));
    }
}

TEST_CASE("cut-off is one on [-1, 1] and vanishes beyond 2")
{
    const Cutoff psi(1.0);
    CHECK(psi(0.0) == 1.0);
    CHECK(psi(1.0) == 1.0);
    CHECK(psi(-0.99) == 1.0);
    CHECK(psi(2.0) == 0.0);
    CHECK(psi(-2.5) == 0.0);
    CHECK(psi(1.5) == doctest::Approx(0.5));
    CHECK(psi.dilated(0.5)(0.75) == doctest::Approx(0.5));
}
