#pragma once

#include "mkdv/field.hpp"

namespace mkdv {

// psi(t) = S(2 - |t| / scale) with the smooth step S(x) = f(x) / (f(x) + f(1 - x)),
// f(x) = e^{-1/x} for x > 0. psi = 1 on [-scale, scale], supp psi = [-2 scale, 2 scale].
class Cutoff {
public:
    explicit Cutoff(double scale = 1.0);
    double scale() const { return scale_; }
    double operator()(double t) const;
    // psi_delta(t) = psi(t / delta)
    Cutoff dilated(double delta) const { return Cutoff(scale_ * delta); }

private:
    double scale_;
};

double smooth_step(double x);

// ||psi||_{H^r_b} on a centered time grid of n samples spanning [-half_span, half_span).
double cutoff_norm(const Cutoff& psi, double r, double b, double half_span, std::size_t n);

}  // namespace mkdv
