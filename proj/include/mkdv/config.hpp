#pragma once

#include "mkdv/probe.hpp"
#include "mkdv/solver.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mkdv {

enum class ExperimentKind { probe, sweep, solve, lipschitz };

std::string_view experiment_name(ExperimentKind k);

struct SolveSpec {
    PicardConfig picard;
    bool measure_constant = false;  // constant = auto: 2 x the largest trilinear ratio measured
    double amplitude = 0.1;         // u0 = amplitude e^{-((x - centre)/width)^2}
    double width = 1.0;
    double centre = 0.0;
    double reference_dt = 1e-3;     // integrating-factor cross-check; 0 disables it
};

struct LipschitzSpec {
    std::vector<double> epsilons{1e-2, 1e-3, 1e-4};
    double delta0 = 0.5;
};

// Configuration text, INI style:
//
//   [experiment]              kind = probe | sweep | solve | lipschitz, seed, out, resolutions
//   [probe]                   estimate, r, s, b, b_prime, p, q, sigma, b_tilde, beta,
//                             r0, s0, b0, r1, s1, b1, samples, dilations, resolution_check,
//                             region_samples
//   [solve]                   delta, r, s, b, b_prime, amplitude, width, centre, half_length,
//                             modes, steps_per_delta, max_iterations, tolerance,
//                             constant (number or auto), nonlinear, allow_outside_smallness,
//                             reference_dt
//   [lipschitz]               epsilons, delta0
//
// Exponents accept decimals or fractions (1/4) and are kept exact; p and q
// accept inf. Lists are comma separated. Comments start with ; or #.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::probe;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::vector<double> resolutions{1.0};
    ProbeConfig probe;
    SolveSpec solve;
    LipschitzSpec lipschitz;
};

// Throws ConfigError (syntax, unknown or missing keys and sections) or
// RangeError (hypotheses violated); either lists every problem found.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Canonical text: every field, fixed order. parse_config(serialize(c)) reproduces c.
std::string serialize(const ExperimentConfig& c);

// FNV-1a of the canonical text, so it ignores key order, spacing and comments.
std::uint64_t config_hash(const ExperimentConfig& c);

// Exact decimal / fraction / integer parsing: "0.55" -> 11/20, "-2/5", "1e-3".
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

}  // namespace mkdv
