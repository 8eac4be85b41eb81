#pragma once

#include "mkdv/cutoff.hpp"
#include "mkdv/field.hpp"
#include "mkdv/norms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mkdv {

// Cut-off integral equation for u_t + u_xxx = (u^3)_x on [-2 delta, 2 delta]:
//   u = psi(t) U(t) u0 + psi_delta(t) int_0^t U(t - t') d_x(u^3)(t') dt'.
struct PicardConfig {
    double delta = 0.5;
    Cutoff psi{1.0};
    Rational r{2};
    Rational s{1, 4};
    Rational b{11, 20};
    Rational b_prime{-17, 40};
    std::size_t max_iterations = 40;
    double tolerance = 1e-12;
    // periodic grid [-L, L) with n modes; steps_per_delta time samples per delta
    double half_length = 20.0;
    std::size_t modes = 256;
    std::size_t steps_per_delta = 1024;
    // estimate constant c of the smallness relation (a measured ratio times a safety factor)
    double constant = 1.0;
    std::string constant_source = "default";
    bool nonlinear = true;
    bool allow_outside_smallness = false;
};

// Every violated hypothesis, empty when the configuration is usable.
std::vector<std::string> violations(const PicardConfig& c);

struct Smallness {
    double radius;     // R = 2 c ||u0||
    double lhs;        // delta^{1 - b + b'}
    double rhs;        // 1 / (4 c R^2)
    bool holds() const { return lhs <= rhs; }
};
Smallness smallness(const SpectralField& u0, const PicardConfig& c);

struct SolveResult {
    SpaceTimeField u;                   // mixed layout on [0, delta]
    std::vector<double> distances;      // X^r_{s,b} norms of successive differences
    std::vector<double> contraction;    // distances[n+1] / distances[n]
    double residual;                    // X^r_{s,b} norm of Lambda u - u at exit
    bool converged;
    std::size_t iterations;
    double extension_norm;              // X^r_{s,b} norm of the cut-off extension
    double sup_norm;                    // sup_{0 <= t <= delta} of the Fourier-Lebesgue norm
    double duhamel_error;               // largest quadrature error estimate seen
    Smallness small;
    std::vector<std::string> diagnostics;

    SpectralField at_delta() const;
};

SolveResult picard_solve(const SpectralField& u0, const PicardConfig& c);

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;  // frequency layout
};

// Integrating-factor RK4 (Lawson) for u^' = i xi^3 u^ + i xi (u^3)^ with 2/3-rule
// dealiasing. States are recorded at `sample_times` (and t_end); steps of size
// dt, shortened only to land on a sample time.
Trajectory reference_integrate(const SpectralField& u0, double t_end, double dt,
                               std::vector<double> sample_times = {}, bool nonlinear = true);

struct Conserved {
    double mass;
    double l2;
    double hamiltonian;
};
Conserved conserved_quantities(const SpectralField& u);

// Kink u = sqrt(2) k tanh(k (x + 2 k^2 t)); the largest pointwise residual of
// u_t + u_xxx - (u^3)_x from closed-form derivatives on n points of [-L, L].
struct KinkResidual {
    double max_residual;
    double scale;  // max of the three terms, for context
};
KinkResidual kink_residual(double k, double half_length, std::size_t n, double t = 0.0);

// A fixed random real direction of unit Fourier-Lebesgue norm, smooth and localized.
SpectralField random_direction(const Grid1D& g, double r, double s, std::uint64_t seed);

struct LipschitzRow {
    double epsilon;
    std::optional<double> quotient;  // numerator / denominator
    double numerator = 0.0;          // sup_t ||u(t) - v(t)||
    double denominator = 0.0;        // ||u0 - v0||
    std::string error;
};
struct LipschitzTable {
    std::vector<LipschitzRow> rows;
    double delta0;
    double variation;  // max / min quotient over the rows that solved
};

LipschitzTable lipschitz_probe(const SpectralField& u0, const std::vector<double>& epsilons,
                               const PicardConfig& c, double delta0, std::uint64_t seed = 1);

// 0.1 e^{-x^2} style Gaussian sampled on a periodic grid, in frequency layout.
SpectralField periodic_gaussian(const Grid1D& g, double amplitude, double width = 1.0,
                                double centre = 0.0);

}  // namespace mkdv
