#pragma once

#include "mkdv/field.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mkdv {

// u^(xi) = A exp(-(xi - c)^2 / (2 w^2)); physically u(x) = A w e^{icx} e^{-w^2 x^2 / 2}.
struct FrequencyAtom {
    double centre;
    double width;
    cplx amplitude;

    cplx value(double xi) const;
    cplx physical(double x) const;
};

// Sum of frequency atoms: the test functions of every probe.
struct Profile1D {
    std::vector<FrequencyAtom> atoms;

    cplx value(double xi) const;
    cplx physical(double x) const;

    // x -> lambda^{1/2} u(lambda x): centre, width scale by lambda, amplitude by lambda^{-1/2}.
    Profile1D dilated(double lambda) const;
    // Smallest K with |u^(xi)| < rel * max amplitude for |xi| > K.
    double band(double rel = 1e-7) const;
    // Smallest X with |u(x)| < rel * max for |x| > X.
    double spatial_extent(double rel = 1e-7) const;
    double min_width() const;
    double max_centre() const;

    // Samples u^(xi_k); the xi = 0 sample is left empty unless keep_zero_mode.
    SpectralField sample(const Grid1D& grid, bool keep_zero_mode = false) const;
};

// h(t) = a exp(-omega^2 (t - tc)^2 / 2) e^{i nu t}, with unitary transform
// h^(tau) = (a / omega) exp(-(tau - nu)^2 / (2 omega^2)) e^{-i (tau - nu) tc}.
struct TimeAtom {
    double omega;
    double t_centre;
    double nu;
    double amplitude = 1.0;

    cplx value(double t) const;
    cplx hat(double tau) const;
    TimeAtom dilated(double lambda) const;  // t -> lambda^3 t
    // pointwise product of two time atoms, again a time atom
    TimeAtom operator*(const TimeAtom& o) const;
    TimeAtom conj() const { return {omega, t_centre, -nu, amplitude}; }
    double support_radius(double rel = 1e-8) const;
};

// u(xi, t) = phi^(xi) h(t) e^{i gamma t xi^3}: gamma = 1 rides the dispersion
// curve tau = xi^3, gamma = 0 is a separable space-time bump, gamma = -1 the mirror curve.
struct SpaceTimeAtom {
    Profile1D space;
    TimeAtom time;
    int gamma = 1;
};

struct SpaceTimeProfile {
    std::vector<SpaceTimeAtom> atoms;

    cplx mixed(double xi, double t) const;        // u^(xi, t)
    cplx interaction(double xi, double t) const;  // e^{-i t xi^3} u^(xi, t)
    cplx hat(double xi, double tau) const;        // u^(xi, tau)
    cplx interaction_hat(double xi, double sigma) const;  // u^(xi, sigma + xi^3)

    SpaceTimeProfile dilated(double lambda) const;
    double band(double rel = 1e-7) const;
    double spatial_extent(double rel = 1e-7) const;
    double min_width() const;
    double min_omega() const;
    double max_omega() const;
    // [t_lo, t_hi] outside which every atom's envelope is below rel
    std::pair<double, double> time_window(double rel = 1e-8) const;
};

// Random test families. Each sample draws from its own generator seeded by
// (seed, sample_id) so results do not depend on evaluation order.
struct FamilySpec {
    std::size_t atoms_min = 1;
    std::size_t atoms_max = 2;
    double centre_max = 1.0;
    double width_min = 0.3;
    double width_max = 0.6;
    bool real = false;  // mirror every atom so u is real
    double omega_min = 4.0;
    double omega_max = 12.0;
    double t_centre_max = 0.1;
    double nu_max = 1.0;
    std::vector<int> gammas{1};
};

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t sample_id, std::uint64_t stream = 0);

Profile1D random_profile(const FamilySpec& spec, std::mt19937_64& rng);
TimeAtom random_time_atom(const FamilySpec& spec, std::mt19937_64& rng);
SpaceTimeProfile random_space_time_profile(const FamilySpec& spec, std::mt19937_64& rng);

// Smallest size >= n of the form 2^a 3^b 5^c, even.
std::size_t nice_size(std::size_t n);

}  // namespace mkdv
