#pragma once

#include "mkdv/config.hpp"
#include "mkdv/record.hpp"

namespace mkdv {

// Runs one configured experiment. Precondition errors propagate; a numerical
// failure part-way through returns the rows gathered so far with partial set.
RunRecord run_experiment(const ExperimentConfig& c);

// Surrogate for the estimate constant of the smallness relation: twice the
// largest trilinear ratio over `samples` draws at lambda = 1.
double measured_constant(const Rational& r, const Rational& s, const Rational& b, const Rational& b_prime,
                         std::uint64_t seed, std::size_t samples = 20);

// u0 of a solve or Lipschitz experiment on its periodic grid.
SpectralField initial_datum(const SolveSpec& spec);

}  // namespace mkdv
