#include "oracles.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/multiplier.hpp"
#include "mkdv/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace mkdv;

namespace {

const Grid1D periodic(20.0, 256, Representation::periodic_fft);

double l2_gap(const SpectralField& a, const SpectralField& b) { return fl_norm(a.minus(b), 2.0, 0.0); }

PicardConfig quick()
{
    PicardConfig c;
    c.steps_per_delta = 512;
    return c;
}

}  // namespace

TEST_CASE("zero datum gives the zero solution")
{
    const SolveResult r = picard_solve(SpectralField::zeros(periodic), quick());
    CHECK(r.converged);
    CHECK(fl_norm(r.at_delta(), 2.0, 0.0) == 0.0);
}

TEST_CASE("linear problem: the fixed point is the free Airy evolution")
{
    PicardConfig c = quick();
    c.nonlinear = false;
    const SpectralField u0 = periodic_gaussian(periodic, 0.3);
    const SolveResult r = picard_solve(u0, c);
    CHECK(r.converged);
    CHECK(l2_gap(r.at_delta(), apply_multiplier(u0, MultiplierSpec::airy(c.delta))) < 1e-12);
    const Trajectory tr = reference_integrate(u0, c.delta, 0.01, {}, false);
    CHECK(l2_gap(tr.states.back(), apply_multiplier(u0, MultiplierSpec::airy(c.delta))) < 1e-12);
}

TEST_CASE("Picard iterate agrees with the integrating-factor reference")
{
    const SpectralField u0 = periodic_gaussian(periodic, 0.1);
    const PicardConfig c = quick();
    const SolveResult r = picard_solve(u0, c);
    REQUIRE(r.converged);
    CHECK(r.small.holds());
    for (double q : r.contraction) CHECK(q <= 0.5);
    const Trajectory tr = reference_integrate(u0, c.delta, 2.5e-3);
    CHECK(l2_gap(tr.states.back(), r.at_delta()) < 1e-6);
}

TEST_CASE("kink residual")
{
    for (double k : {0.5, 1.0, 1.5}) {
        CHECK(kink_residual(k, 15.0, 1001).max_residual < 1e-10);
        // independent check of the ansatz: the finite-difference residual is pure O(h^2) truncation
        for (double x : {-1.0, 0.0, 0.4, 2.0}) {
            const double coarse = std::abs(oracle::kink_fd_residual(k, x, 0.2, 2e-2));
            const double fine = std::abs(oracle::kink_fd_residual(k, x, 0.2, 1e-2));
            CHECK(fine <= 0.3 * coarse + 1e-8);
        }
    }
    // a wrong speed is caught
    auto wrong = [](double x) {
        const double k = 1.0, h = 1e-3;
        auto u = [&](double x_, double t_) { return std::sqrt(2.0) * k * std::tanh(k * (x_ + 3.0 * t_)); };
        const double ut = (u(x, h) - u(x, -h)) / (2 * h);
        const double uxxx = (u(x + 2 * h, 0) - 2 * u(x + h, 0) + 2 * u(x - h, 0) - u(x - 2 * h, 0)) / (2 * h * h * h);
        auto c = [&](double y) { return std::pow(u(y, 0), 3); };
        return ut + uxxx - (c(x + h) - c(x - h)) / (2 * h);
    };
    CHECK(std::abs(wrong(0.0)) > 0.1);
}

TEST_CASE("conserved quantities of a Gaussian")
{
    const double a = 0.3, pi = oracle::pi;
    const Conserved q = conserved_quantities(periodic_gaussian(periodic, a));
    CHECK(q.mass == doctest::Approx(a * std::sqrt(pi)).epsilon(1e-12));
    CHECK(q.l2 == doctest::Approx(a * a * std::sqrt(pi / 2)).epsilon(1e-12));
    CHECK(q.hamiltonian == doctest::Approx(0.5 * a * a * std::sqrt(pi / 2) + a * a * a * a * std::sqrt(pi) / 8)
                               .epsilon(1e-12));
}

TEST_CASE("conservation along the reference flow")
{
    const SpectralField u0 = periodic_gaussian(periodic, 0.5);
    const Trajectory tr = reference_integrate(u0, 0.5, 0.005);
    const Conserved a = conserved_quantities(u0), b = conserved_quantities(tr.states.back());
    CHECK(std::abs(b.mass - a.mass) < 1e-10 * a.mass);
    CHECK(std::abs(b.l2 - a.l2) < 1e-8 * a.l2);
    CHECK(std::abs(b.hamiltonian - a.hamiltonian) < 1e-6 * a.hamiltonian);
}

TEST_CASE("precondition failures")
{
    const SpectralField u0 = periodic_gaussian(periodic, 0.1);
    SUBCASE("zero perturbation size")
    {
        CHECK_THROWS_AS(lipschitz_probe(u0, {1e-3, 0.0}, quick(), 0.5), ParameterError);
    }
    SUBCASE("grid that does not match the configuration")
    {
        const Grid1D g(20.0, 128, Representation::periodic_fft);
        CHECK_THROWS_AS(picard_solve(periodic_gaussian(g, 0.1), quick()), ShapeError);
    }
    SUBCASE("complex datum")
    {
        std::vector<cplx> v(u0.coeffs().begin(), u0.coeffs().end());
        v[periodic.zero_index() + 3] += cplx(0.0, 1e-3);
        CHECK_THROWS_AS(picard_solve(SpectralField(periodic, v), quick()), RealityError);
    }
    SUBCASE("datum outside the smallness relation")
    {
        CHECK_THROWS_AS(picard_solve(periodic_gaussian(periodic, 3.0), quick()), ParameterError);
    }
    SUBCASE("invalid exponents")
    {
        PicardConfig c = quick();
        c.b = Rational(2, 5);
        CHECK_FALSE(violations(c).empty());
        CHECK_THROWS_AS(picard_solve(u0, c), PreconditionError);
    }
}

TEST_CASE("large data with the smallness check overridden fail numerically")
{
    PicardConfig c = quick();
    c.allow_outside_smallness = true;
    c.delta = 1.0;
    CHECK_THROWS_AS(picard_solve(periodic_gaussian(periodic, 6.0), c), NumericalError);
}

TEST_CASE("random directions have unit norm")
{
    const SpectralField d = random_direction(periodic, 2.0, 0.25, 4);
    CHECK(fl_norm(d, 2.0, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.real_flag());
}

TEST_CASE("Lipschitz quotients of the linear flow are one")
{
    PicardConfig c = quick();
    c.nonlinear = false;
    const LipschitzTable t = lipschitz_probe(periodic_gaussian(periodic, 0.1), {1e-2, 1e-4}, c, 0.5);
    for (const auto& r : t.rows) {
        REQUIRE(r.quotient.has_value());
        CHECK(std::abs(*r.quotient - 1.0) < 1e-10);
    }
}
