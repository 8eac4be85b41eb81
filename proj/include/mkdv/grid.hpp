#pragma once

#include <cstddef>

namespace mkdv {

// How samples stand in for functions on the real line. Quadrature grids feed
// the estimate probes; periodic grids feed the solver. Both share the same
// unitary transform.
enum class Representation { quadrature, periodic_fft };

// x in [-L, L), n even modes with spacing dxi = pi / L; xi_k = (k - n/2) dxi.
class Grid1D {
public:
    Grid1D(double half_length, std::size_t n_modes,
           Representation rep = Representation::quadrature);

    double half_length() const { return half_length_; }
    std::size_t size() const { return n_; }
    Representation representation() const { return rep_; }

    double dx() const { return 2.0 * half_length_ / static_cast<double>(n_); }
    double dxi() const;
    double x(std::size_t j) const { return -half_length_ + static_cast<double>(j) * dx(); }
    double xi(std::size_t k) const { return mode(k) * dxi(); }
    // signed mode number k - n/2
    double mode(std::size_t k) const
    {
        return static_cast<double>(static_cast<long>(k) - static_cast<long>(n_ / 2));
    }
    std::size_t zero_index() const { return n_ / 2; }
    double xi_max() const { return static_cast<double>(n_ / 2) * dxi(); }

    bool operator==(const Grid1D& other) const;

private:
    double half_length_;
    std::size_t n_;
    Representation rep_;
};

// Uniform periodic time samples t_j = t_lo + j dt, dt = (t_hi - t_lo) / n_times,
// dual frequencies tau_m = (m - n_times/2) dtau with dtau = 2 pi / (t_hi - t_lo).
class SpaceTimeGrid {
public:
    SpaceTimeGrid(Grid1D space, std::size_t n_times, double t_lo, double t_hi);

    const Grid1D& space() const { return space_; }
    std::size_t n_times() const { return n_times_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    double span() const { return t_hi_ - t_lo_; }
    double dt() const { return span() / static_cast<double>(n_times_); }
    double t(std::size_t j) const { return t_lo_ + static_cast<double>(j) * dt(); }
    double dtau() const;
    double tau(std::size_t m) const
    {
        return static_cast<double>(static_cast<long>(m) - static_cast<long>(n_times_ / 2)) * dtau();
    }
    std::size_t points() const { return n_times_ * space_.size(); }

    bool operator==(const SpaceTimeGrid& other) const;

private:
    Grid1D space_;
    std::size_t n_times_;
    double t_lo_;
    double t_hi_;
};

// dxi = xi_unit and dtau = xi_unit^3 / periods: every xi_k^3 is an integer
// multiple of dtau, so the Airy lift acts on the tau axis as a cyclic shift.
SpaceTimeGrid commensurate_grid(double xi_unit, std::size_t n_modes, std::size_t periods,
                                std::size_t n_times);

}  // namespace mkdv
