#pragma once

#include "mkdv/profile.hpp"

namespace mkdv {

// ||e^{-t d^3} u||_{L^p_t(D^sigma L^q_x)} over t in R for a Gaussian-atom profile.
// Each time sample gets its own grid, recentred on the dispersing packet and
// wide enough that nothing wraps; |t| <= T is integrated directly (Simpson on
// a uniform inner mesh and a logarithmic outer mesh) and the |t| > T tail is
// extrapolated from the measured power-law decay.
struct FlowNormOptions {
    double p;
    double q;
    double sigma = 0.0;
    bool homogeneous = true;
    double horizon = 32.0;     // T in units of the dispersion time of the profile
    double resolution = 1.0;   // refinement factor for every mesh
    std::size_t max_modes = std::size_t{1} << 16;
};

struct FlowNormResult {
    double value;           // (direct + tail)^{1/p}
    double direct;          // int_{|t|<=T} ||.||^p
    double tail;            // extrapolated int_{|t|>T} ||.||^p
    double tail_fraction;   // tail / (direct + tail)
    double t_direct;
    double decay_exponent;  // fitted exponent a in ||.||^p ~ t^{-a}
    std::size_t max_modes_used;
    std::size_t time_samples;
};

FlowNormResult flow_norm(const Profile1D& u, const FlowNormOptions& opt);

// ||e^{-t d^3} u||_{L^q_x} (with D^sigma) at one time, on a grid chosen as above.
double flow_slice_norm(const Profile1D& u, double t, const FlowNormOptions& opt, std::size_t* modes = nullptr);

// |z|^q from |z|^2, with a fast path for even integer q.
double pow_from_norm(double abs2, double q);

}  // namespace mkdv
