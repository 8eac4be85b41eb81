#pragma once

#include "mkdv/field.hpp"
#include "mkdv/norms.hpp"

#include <array>

namespace mkdv {

// I_-^s(f, g)^(xi) = (2 pi)^{-1/2} int_{xi1 + xi2 = xi} |xi1 - xi2|^s f^(xi1) g^(xi2) dxi1.
// The (2 pi)^{-1/2} makes s = 0 the transform of the pointwise product f g.
// Direct O(N^2) quadrature; terms with xi2 off the grid are dropped, so data
// should be band-limited to half the grid.
SpectralField i_minus(const SpectralField& f, const SpectralField& g, double s);

// I_+^s(f, g)^(xi): same with weight |xi + xi2|^s.
SpectralField i_plus(const SpectralField& f, const SpectralField& g, double s);

// Transform of the complex conjugate: conj(u^(-xi)); the unmatched edge mode is 0.
SpectralField conjugate_field(const SpectralField& u);

// M_u v = I_-^s(u, v) and N_u w = I_+^s(w, conj u): formally adjoint in L^2.
SpectralField m_operator(const SpectralField& u, const SpectralField& v, double s);
SpectralField n_operator(const SpectralField& u, const SpectralField& w, double s);

// <f, g> = sum dxi f^ conj(g^)
cplx inner(const SpectralField& f, const SpectralField& g);

// Zeros and weights of g(x) = 3 xi (x^2 + xi (xi1 - x) - xi1^2), the resonance
// function in eta1 after eliminating eta2 = xi - eta1.
template <class T>
struct ResonanceData {
    T xi;
    T xi1;
    std::array<T, 2> zeros;    // {xi1, xi - xi1}
    std::array<T, 2> weights;  // |g'| at each zero = 3 |xi| |2 xi1 - xi|
};

// DegenerateResonanceError when xi = 0 or 2 xi1 = xi (double zero).
ResonanceData<Rational> resonance_data(const Rational& xi, const Rational& xi1);
ResonanceData<double> resonance_data(double xi, double xi1);

// Coefficients {c0, c1, c2} of g(x) = c0 + c1 x + c2 x^2.
std::array<Rational, 3> resonance_polynomial(const Rational& xi, const Rational& xi1);

// xi1^3 + xi2^3 - eta1^3 - eta2^3, and the factored form 3 xi (xi1^2 - eta1^2 + xi (eta1 - xi1))
// with xi2 = xi - xi1, eta2 = xi - eta1.
Rational resonance_cubic(const Rational& xi, const Rational& xi1, const Rational& eta1);
Rational resonance_factored(const Rational& xi, const Rational& xi1, const Rational& eta1);

struct Lemma3Value {
    double diagonal;         // (1/3) int dxi int dxi1 |u1^(xi1)|^2 |u2^(xi2)|^2
    cplx cross;              // (1/3) int dxi int dxi1 u1^(xi1) conj u1^(xi2) u2^(xi2) conj u2^(xi1)
    double cross_modulus;
    double cross_bound;      // (1/3) ||u1^ u2^||_{L^1}^2, the Cauchy-Schwarz bound on |cross|
    double value;            // diagonal + Re cross = ||I^{1/2} I_-^{1/2}(U u1, U u2)||^2_{L^2_xt}
    std::size_t degenerate_samples;  // grid pairs with xi = 0 or 2 xi1 = xi
    static constexpr double constant = 1.0 / 3.0;
};

// The delta-measure collapse of the time integral, exact in this transform
// convention. Degenerate pairs (a measure-zero set) are counted and kept with
// the continuous collapsed integrand. Requires quadrature grids and an empty
// zero mode.
Lemma3Value lemma3_closed_form(const SpectralField& u1, const SpectralField& u2);

}  // namespace mkdv
