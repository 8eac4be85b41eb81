#pragma once

#include "mkdv/norms.hpp"
#include "mkdv/profile.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mkdv {

enum class EstimateKind {
    L8_STRICHARTZ,
    LEMMA4,
    FS_AIRY,
    COR3_GENERAL,
    XNORM_30,
    XNORM_31,
    BILINEAR_L3,
    COR_K1,
    COR_K2,
    COR_K10,
    LEMMA2_DELTA,
    HOMOG_5,
    EMBED_4,
    EMBED_52,
    TRILINEAR_T2,
};

std::string_view kind_name(EstimateKind k);
std::optional<EstimateKind> parse_kind(std::string_view name);
const std::vector<EstimateKind>& all_kinds();

// Exponent bookkeeping for every kind, kept exact. inv_p = 1/p and inv_q = 1/q
// so that p = infinity is inv_p = 0. Each kind reads the fields it needs.
struct ProbeParams {
    Rational r{2};
    Rational s{0};
    Rational b{11, 20};
    Rational b_prime{-2, 5};
    Rational inv_p{1, 6};
    Rational inv_q{1, 6};
    Rational sigma{0};
    Rational b_tilde{23, 60};
    Rational beta{2, 5};
    Rational r0{2};
    Rational s0{0};
    Rational b0{1, 2};
    Rational r1{3, 2};
    Rational s1{1, 4};
    Rational b1{43, 60};
};

// Defaults that satisfy each kind's hypotheses.
ProbeParams default_params(EstimateKind k);

// Every violated hypothesis of the kind, worded after the hypothesis itself
// (e.g. "r must satisfy 2 ≥ r > 4/3"); empty when the parameters are valid.
std::vector<std::string> violations(EstimateKind k, const ProbeParams& p);
// Throws RangeError listing all violations.
void validate(EstimateKind k, const ProbeParams& p);

struct ProbeConfig {
    EstimateKind kind = EstimateKind::L8_STRICHARTZ;
    ProbeParams params;
    FamilySpec family;
    std::size_t samples = 100;
    std::vector<double> dilations{1.0};   // for LEMMA2_DELTA: the delta values
    std::uint64_t seed = 1;
    double resolution = 1.0;
    bool resolution_check = false;        // compare sample 0 against a doubled resolution
    std::size_t region_samples = 0;       // TRILINEAR_T2: samples that get the A/B/C split
};

// Kind defaults: parameters, test family, 100 samples, dilations 2^-3..2^3
// (LEMMA2_DELTA: delta = 2^0..2^-6).
ProbeConfig default_probe(EstimateKind k);

struct ProbeSample {
    std::size_t sample_id;
    double lambda;
    double lhs;
    double rhs;
    double ratio;        // lhs / (scale * rhs)
    double scale = 1.0;  // delta^{1+b'-b} for LEMMA2_DELTA, else 1
};

struct SlopeFit {
    double slope;
    double intercept;
    double residual;  // root-mean-square residual of the log-log fit
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct LambdaSummary {
    double lambda;
    double max_ratio;
    double min_ratio;
    double median_ratio;
};

// A/B/C split of the trilinear left side for one sample (norms of the
// region-restricted integrands, same weights as the full left side).
struct RegionRatios {
    std::size_t sample_id;
    double lambda;
    double region_a;
    double region_b;
    double region_c;
    double total;        // semi-analytic full left side
    double pseudo_spectral;  // the probe's own left side, for consistency
    double rhs;
};

struct EstimateReport {
    EstimateKind kind;
    ProbeParams params;
    std::uint64_t seed;
    std::vector<ProbeSample> samples;
    double max_ratio = 0;
    double min_ratio = 0;
    double median_ratio = 0;
    double spread = 0;          // max / median over every sample and dilation
    double lambda_spread = 0;   // max over dilations of per-dilation max, over the min of those
    std::vector<LambdaSummary> per_lambda;
    std::optional<SlopeFit> slope;        // LEMMA2_DELTA: log(lhs/rhs) against log delta, pooled
    std::optional<double> min_sample_slope;
    std::optional<double> predicted_slope;  // 1 + b' - b
    std::optional<double> cap;            // EMBED_*: the explicit Hölder constant
    std::vector<RegionRatios> regions;
    std::vector<std::string> diagnostics;
    bool flagged = false;       // spread >= 10: the uniform-constant proxy is breached

    static constexpr double spread_limit = 10.0;
};

// `sink` sees every sample as soon as it is evaluated, so a caller can keep
// the rows of a run that later fails.
using SampleSink = std::function<void(const ProbeSample&)>;
EstimateReport run_probe(const ProbeConfig& config, const SampleSink& sink = {});

// Re-run the probe over the given dilations; per_lambda carries the summary.
EstimateReport scaling_sweep(ProbeConfig config, const std::vector<double>& lambdas, const SampleSink& sink = {});

// One (lhs, rhs) evaluation of a kind for a sample at dilation (or delta) lambda.
struct Evaluation {
    Evaluation(double l, double r, double sc = 1.0, std::string n = {}) : lhs(l), rhs(r), scale(sc), note(std::move(n)) {}
    double lhs;
    double rhs;
    double scale = 1.0;  // ratio = lhs / (scale * rhs); delta^{1+b'-b} for LEMMA2_DELTA
    std::string note;
};
Evaluation evaluate_kind(const ProbeConfig& config, std::size_t sample_id, double lambda, double resolution);

// Semi-analytic A/B/C split of the TRILINEAR_T2 left side for one sample.
RegionRatios trilinear_regions(const ProbeConfig& config, std::size_t sample_id, double lambda, double resolution);

// Region classifier with the fixed constant 4: a ~ b iff max/min <= 4, a >> b iff a > 4 b.
enum class Region { A, B, C };
Region classify_triple(double xi1, double xi2, double xi3);

// Explicit constants of the two embeddings.
double embed4_cap(const ProbeParams& p);
double embed52_cap(const ProbeParams& p);

// X^r_{s,b} norm of a space-time profile from samples of its interaction-picture
// transform u^(xi, sigma + xi^3); `r` may be any exponent > 1.
double profile_x_norm(const SpaceTimeProfile& u, double r, double s, double b, double resolution = 1.0);

}  // namespace mkdv
