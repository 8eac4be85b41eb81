#pragma once

#include "mkdv/field.hpp"

#include <cmath>

namespace mkdv {

enum class MultiplierKind { bessel, riesz, airy, lambda };

// What riesz(s < 0) does at xi = 0. With `none` a populated zero mode is a
// domain error; `drop` sets the symbol to 0 there.
enum class ZeroModePolicy { none, drop };

struct MultiplierSpec {
    MultiplierKind kind;
    double param;
    ZeroModePolicy zero_mode = ZeroModePolicy::none;

    static MultiplierSpec bessel(double s) { return {MultiplierKind::bessel, s}; }
    static MultiplierSpec riesz(double s, ZeroModePolicy p = ZeroModePolicy::none)
    {
        return {MultiplierKind::riesz, s, p};
    }
    static MultiplierSpec airy(double t) { return {MultiplierKind::airy, t}; }
    static MultiplierSpec lambda(double b) { return {MultiplierKind::lambda, b}; }

    // Symbol at (xi, tau); tau is ignored except for lambda.
    cplx symbol(double xi, double tau = 0.0) const;
};

// <x> = (1 + x^2)^{1/2}
inline double japanese(double x) { return std::sqrt(1.0 + x * x); }

SpectralField apply_multiplier(const SpectralField& u, const MultiplierSpec& spec);

// bessel/riesz/airy act on the xi axis in mixed or frequency layout; lambda
// needs the full (xi, tau) frequency layout.
SpaceTimeField apply_multiplier(const SpaceTimeField& u, const MultiplierSpec& spec);

// Row j of a mixed-layout field multiplied by e^{i sign t_j xi^3}: sign = +1
// applies U(t) pointwise in time, sign = -1 pulls back to the interaction picture.
SpaceTimeField apply_group(const SpaceTimeField& u, int sign);

}  // namespace mkdv
