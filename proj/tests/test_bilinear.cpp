#include "oracles.hpp"

#include "mkdv/bilinear.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/transform.hpp"

#include <doctest.h>

#include <random>

using namespace mkdv;

TEST_CASE("resonance function: factored and expanded forms agree exactly")
{
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long long> num(-40, 40), den(1, 15);
    for (int i = 0; i < 500; ++i) {
        const Rational xi(num(rng), den(rng)), xi1(num(rng), den(rng)), eta1(num(rng), den(rng));
        const Rational xi2 = xi - xi1, eta2 = xi - eta1;
        const Rational direct = xi1 * xi1 * xi1 + xi2 * xi2 * xi2 - eta1 * eta1 * eta1 - eta2 * eta2 * eta2;
        CHECK(resonance_factored(xi, xi1, eta1) == direct);
        CHECK(resonance_cubic(xi, xi1, eta1) == direct);
    }
}

TEST_CASE("resonance zeros and weights")
{
    const Rational xi(5, 3), xi1(1, 2);
    const auto d = resonance_data(xi, xi1);
    CHECK(d.zeros[0] == xi1);
    CHECK(d.zeros[1] == xi - xi1);
    // 3 |xi| |2 xi1 - xi| = 3 (5/3) (2/3)
    CHECK(d.weights[0] == Rational(10, 3));
    CHECK(d.weights[1] == Rational(10, 3));
    CHECK_THROWS_AS(resonance_data(Rational(0), Rational(1)), DegenerateResonanceError);
    CHECK_THROWS_AS(resonance_data(Rational(2), Rational(1)), DegenerateResonanceError);
    const auto dd = resonance_data(5.0 / 3.0, 0.5);
    CHECK(dd.weights[0] == doctest::Approx(10.0 / 3.0));
}

TEST_CASE("I_- with s = 0 is the transform of the product")
{
    const Grid1D g(30.0, 256);
    const Profile1D p{{{0.4, 0.4, cplx(1.0, 0.5)}}}, q{{{-0.3, 0.3, cplx(0.2, -0.7)}}};
    const SpectralField f = p.sample(g, true), h = q.sample(g, true);
    const SpectralField prod = i_minus(f, h, 0.0);
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = p.physical(g.x(j)) * q.physical(g.x(j));
    const auto want = oracle::direct_transform(v, g.dx(), g.x(0));
    double gap = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        gap = std::max(gap, std::abs(prod[k] - want[k]));
        peak = std::max(peak, std::abs(want[k]));
    }
    CHECK(gap < 1e-10 * peak);
}

TEST_CASE("M and N are adjoint")
{
    const Grid1D g(30.0, 128);
    const SpectralField u = Profile1D{{{0.3, 0.4, cplx(1.0, 0.3)}}}.sample(g);
    const SpectralField v = Profile1D{{{-0.2, 0.3, cplx(0.5, -1.0)}}}.sample(g);
    const SpectralField w = Profile1D{{{0.1, 0.5, cplx(-0.4, 0.2)}}}.sample(g);
    for (double s : {0.0, 0.5, 1.0}) {
        const cplx lhs = inner(m_operator(u, v, s), w);
        const cplx rhs = inner(v, n_operator(u, w, s));
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
    }
}

TEST_CASE("closed form: diagonal and cross terms")
{
    const Grid1D g(60.0, 256);
    const FrequencyAtom a{1.2, 0.3, 1.0}, b{-0.6, 0.2, cplx(0.0, 2.0)};
    const auto v = lemma3_closed_form(Profile1D{{a}}.sample(g), Profile1D{{b}}.sample(g));
    // separated atoms away from xi = 0: diagonal = (1/3) ||u1||^2 ||u2||^2, ||u||^2 = |A|^2 w sqrt(pi)
    const double l2a = 0.3 * std::sqrt(oracle::pi), l2b = 4.0 * 0.2 * std::sqrt(oracle::pi);
    CHECK(v.diagonal == doctest::Approx(l2a * l2b / 3.0).epsilon(1e-3));
    CHECK(v.cross_modulus <= v.cross_bound * (1 + 1e-12));
    CHECK(v.value == doctest::Approx(v.diagonal + v.cross.real()));
    CHECK_THROWS_AS(lemma3_closed_form(Profile1D{{a}}.sample(g, true), Profile1D{{b}}.sample(g)), DomainError);
}

TEST_CASE("closed form agrees with brute-force space-time quadrature")
{
    // the acceptance run covers ten random pairs; one fixed pair here
    const FrequencyAtom a1{0.45, 0.15, cplx(0.8, 0.6)}, a2{2.0, 0.12, 1.0};
    const double dxi = (a2.centre + 7 * a2.width) / 64.0;
    const Grid1D g(oracle::pi / dxi, 128);
    const auto closed = lemma3_closed_form(Profile1D{{a1}}.sample(g), Profile1D{{a2}}.sample(g));
    const auto bf = oracle::bilinear_brute_force(a1, a2);
    CHECK(closed.value == doctest::Approx(bf.value).epsilon(0.02));
}
