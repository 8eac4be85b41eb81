#include "oracles.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/probe.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace mkdv;

namespace {

ProbeConfig small(EstimateKind k, std::size_t samples, std::vector<double> dilations)
{
    ProbeConfig c = default_probe(k);
    c.samples = samples;
    c.dilations = std::move(dilations);
    return c;
}

}  // namespace

TEST_CASE("kind names round trip")
{
    CHECK(all_kinds().size() == 15);
    for (EstimateKind k : all_kinds()) CHECK(parse_kind(kind_name(k)) == k);
    CHECK_FALSE(parse_kind("NOT_A_KIND").has_value());
}

TEST_CASE("defaults satisfy every hypothesis")
{
    for (EstimateKind k : all_kinds()) CHECK_MESSAGE(violations(k, default_params(k)).empty(), kind_name(k));
}

TEST_CASE("hypothesis violations are worded after the hypothesis")
{
    ProbeParams p = default_params(EstimateKind::TRILINEAR_T2);
    p.r = Rational(6, 5);
    try {
        validate(EstimateKind::TRILINEAR_T2, p);
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("2 ≥ r > 4/3 (got r = 6/5)") != std::string::npos);
    }
    p = default_params(EstimateKind::TRILINEAR_T2);
    p.b_prime = Rational(-1, 4);
    p.b = Rational(1, 3);
    const auto v = violations(EstimateKind::TRILINEAR_T2, p);
    CHECK(v.size() == 2);
}

TEST_CASE("homogeneous identity holds to rounding")
{
    const EstimateReport rep = run_probe(small(EstimateKind::HOMOG_5, 3, {0.5, 1.0, 2.0}));
    for (const auto& s : rep.samples) CHECK(s.ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("a sweep over lambda = 1 repeats the single run")
{
    const ProbeConfig c = small(EstimateKind::BILINEAR_L3, 4, {1.0});
    const EstimateReport a = run_probe(c), b = scaling_sweep(c, {1.0});
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].ratio == b.samples[i].ratio);
}

TEST_CASE("scale-invariant estimates give the same ratios at every dilation")
{
    const EstimateReport rep = run_probe(small(EstimateKind::L8_STRICHARTZ, 6, {0.25, 1.0, 4.0}));
    REQUIRE(rep.per_lambda.size() == 3);
    CHECK(rep.lambda_spread < 1.05);
}

TEST_CASE("samples are reproducible and order independent")
{
    ProbeConfig c = small(EstimateKind::FS_AIRY, 5, {1.0});
    const EstimateReport a = run_probe(c);
    c.samples = 3;
    const EstimateReport b = run_probe(c);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a.samples[i].ratio == b.samples[i].ratio);
}

TEST_CASE("every kind evaluates a finite positive ratio")
{
    for (EstimateKind k : all_kinds()) {
        const ProbeConfig c = small(k, 1, {1.0});
        const Evaluation e = evaluate_kind(c, 0, 1.0, 1.0);
        CHECK_MESSAGE(std::isfinite(e.lhs / e.rhs), kind_name(k));
        CHECK_MESSAGE(e.lhs > 0.0, kind_name(k));
    }
}

TEST_CASE("embedding ratios stay under their explicit constants")
{
    for (EstimateKind k : {EstimateKind::EMBED_4, EstimateKind::EMBED_52}) {
        const EstimateReport rep = run_probe(small(k, 10, {0.5, 1.0, 2.0}));
        REQUIRE(rep.cap.has_value());
        CHECK(rep.max_ratio <= *rep.cap);
    }
}

TEST_CASE("cut-off Duhamel bound: fitted delta power")
{
    ProbeConfig c = small(EstimateKind::LEMMA2_DELTA, 3, {1.0, 0.5, 0.25, 0.125});
    const EstimateReport rep = run_probe(c);
    REQUIRE(rep.slope.has_value());
    REQUIRE(rep.predicted_slope.has_value());
    CHECK(*rep.predicted_slope == doctest::Approx(1.0 - 0.3 - 0.6));
    CHECK(rep.slope->slope >= *rep.predicted_slope - 0.1);
}

TEST_CASE("region classifier")
{
    CHECK(classify_triple(1.0, 1.5, 2.0) == Region::A);     // all comparable
    CHECK(classify_triple(10.0, 1.0, 0.5) == Region::C);    // one dominates
    CHECK(classify_triple(10.0, 9.0, 0.1) == Region::B);
}

TEST_CASE("trilinear regions account for the whole left side")
{
    ProbeConfig c = small(EstimateKind::TRILINEAR_T2, 1, {1.0});
    const RegionRatios r = trilinear_regions(c, 0, 1.0, 1.0);
    // triangle inequality on the three restricted pieces
    CHECK(r.total <= (r.region_a + r.region_b + r.region_c) * (1 + 1e-9));
    CHECK(r.total == doctest::Approx(r.pseudo_spectral).epsilon(0.05));
}

TEST_CASE("high-frequency decay of the first embedding")
{
    // b0 = 1/r0 leaves room: the ratio falls once the data leaves the unit frequency band
    const EstimateReport rep = run_probe(small(EstimateKind::EMBED_4, 4, {1.0, 8.0}));
    REQUIRE(rep.per_lambda.size() == 2);
    CHECK(rep.per_lambda[1].max_ratio < rep.per_lambda[0].max_ratio);
}

TEST_CASE("bilinear smoothing estimate at s = 1/2 against the time-resolved bilinear identity")
{
    // u = phi^ h(t) e^{it xi^3}: the squared left side is int |h1 h2|^2 G(t) dt with
    // G(t) the squared L^2_x norm of I^{1/2} I_-^{1/2}(U phi1, U phi2) at time t
    ProbeConfig c = small(EstimateKind::COR_K1, 3, {1.0});
    c.params.s = Rational(1, 2);
    c.family.atoms_min = c.family.atoms_max = 1;
    c.family.gammas = {1};
    for (std::size_t id = 0; id < c.samples; ++id) {
        auto r0 = sample_rng(c.seed, id, 0), r1 = sample_rng(c.seed, id, 1);
        const SpaceTimeAtom f = random_space_time_profile(c.family, r0).atoms[0];
        const SpaceTimeAtom g = random_space_time_profile(c.family, r1).atoms[0];
        auto h2 = [&](double t) { return std::norm(f.time.value(t) * g.time.value(t)); };
        const double reach = 9.0 / std::min(f.time.omega, g.time.omega);
        const double lo = std::min(f.time.t_centre, g.time.t_centre) - reach;
        const double hi = std::max(f.time.t_centre, g.time.t_centre) + reach;
        const double want =
            std::sqrt(oracle::enveloped_bilinear(f.space.atoms[0], g.space.atoms[0], h2, lo, hi));
        const Evaluation e = evaluate_kind(c, id, 1.0, 1.0);
        CHECK(e.lhs == doctest::Approx(want).epsilon(0.01));
    }
}
