#pragma once

#include "mkdv/field.hpp"

#include <boost/rational.hpp>

#include <limits>

namespace mkdv {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& q)
{
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// (r, s, b) with r in (1, 2]; r is kept exact so 1/r + 1/r' = 1 holds exactly.
struct NormParams {
    Rational r;
    double s;
    double b;

    NormParams(Rational r_, double s_, double b_);
    Rational r_prime() const { return r / (r - 1); }
    double rv() const { return to_double(r); }
    double rpv() const { return to_double(r_prime()); }
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct MixedNormParams {
    double p;
    double q;
    double sigma;
    bool homogeneous = true;  // |xi|^sigma (true) or <xi>^sigma (false)
};

// r' = r / (r - 1), with r = infinity -> 1; r <= 1 is a ParameterError.
double conjugate_exponent(double r);

// ||<xi>^s u^||_{L^{r'}} with uniform weights dxi (exact Plancherel at r = 2).
// Accepts any r > 1 so dual exponents are available; r <= 1 is rejected.
double fl_norm(const SpectralField& u, double r, double s);
double fl_norm(const SpectralField& u, const NormParams& p);

// The r = 1 member of the scale: sup_xi <xi>^s |u^(xi)|.
double fl_sup_norm(const SpectralField& u, double s);

// Hat-function average (1/h) int (1 - |x - sigma|/h)_+ <x>^beta dx. As a
// quadrature weight it integrates <sigma>^beta exactly against piecewise-linear
// data, so coarse tau lattices (h >> 1) still see the O(1)-wide peak or cusp of
// the weight at sigma = 0; it tends to <sigma>^beta when h << <sigma>.
double modulation_weight(double sigma, double h, double beta);

// Space-time norms of a (xi, tau) frequency-layout field with weights
// <tau>^b (hrsb) or <tau - xi^3>^b (xrsb); the modulation weight enters
// through modulation_weight on the tau lattice.
double hrsb_norm(const SpaceTimeField& F, double r, double s, double b);
double xrsb_norm(const SpaceTimeField& F, double r, double s, double b);
double xrsb_norm(const SpaceTimeField& F, const NormParams& p);

// X^r_{s,b} norm of a mixed-layout (xi, t) field through the interaction
// picture: ||u||_X = ||U(-.)u||_{H^r_{s,b}}. `pad` >= 1 zero-pads the time
// window (centered) to refine the tau quadrature.
double xrsb_norm_mixed(const SpaceTimeField& u, double r, double s, double b, std::size_t pad = 1);

// (int dt ||D^sigma u(t)||_{L^q_x}^p)^{1/p} on a physical or mixed field;
// p or q = infinity is a max over samples.
double mixed_norm(const SpaceTimeField& u, const MixedNormParams& p);

// Discrete (sum w |v|^p)^{1/p}, or max |v| for p = infinity.
double weighted_lp(std::span<const double> abs_values, double weight, double p);

// s(r) = 1/2 - 1/(2r) for r in (4/3, 2]; RangeError otherwise.
Rational scale_exponent(const Rational& r);
double scale_exponent(double r);

}  // namespace mkdv
