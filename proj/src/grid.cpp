#include "mkdv/grid.hpp"

#include "mkdv/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mkdv {

Grid1D::Grid1D(double half_length, std::size_t n_modes, Representation rep)
    : half_length_(half_length), n_(n_modes), rep_(rep)
{
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw ParameterError("grid half_length must be positive and finite");
    if (n_modes < 8 || n_modes % 2 != 0)
        throw ParameterError("grid n_modes must be even and >= 8, got " + std::to_string(n_modes));
}

double Grid1D::dxi() const { return std::numbers::pi / half_length_; }

bool Grid1D::operator==(const Grid1D& other) const
{
    return n_ == other.n_ && half_length_ == other.half_length_ && rep_ == other.rep_;
}

SpaceTimeGrid::SpaceTimeGrid(Grid1D space, std::size_t n_times, double t_lo, double t_hi)
    : space_(space), n_times_(n_times), t_lo_(t_lo), t_hi_(t_hi)
{
    if (n_times < 8) throw ParameterError("space-time grid needs n_times >= 8");
    if (!(t_hi > t_lo)) throw ParameterError("space-time grid needs t_hi > t_lo");
}

double SpaceTimeGrid::dtau() const { return 2.0 * std::numbers::pi / span(); }

bool SpaceTimeGrid::operator==(const SpaceTimeGrid& other) const
{
    return space_ == other.space_ && n_times_ == other.n_times_ && t_lo_ == other.t_lo_ &&
           t_hi_ == other.t_hi_;
}

SpaceTimeGrid commensurate_grid(double xi_unit, std::size_t n_modes, std::size_t periods,
                                std::size_t n_times)
{
    if (!(xi_unit > 0.0)) throw ParameterError("xi_unit must be positive");
    if (periods == 0) throw ParameterError("periods must be positive");
    // xi_k^3 = k^3 xi_unit^3 is an integer multiple of dtau = xi_unit^3 / periods.
    const double pi = std::numbers::pi;
    const double span = 2.0 * pi * static_cast<double>(periods) / (xi_unit * xi_unit * xi_unit);
    return SpaceTimeGrid(Grid1D(pi / xi_unit, n_modes), n_times, -0.5 * span, 0.5 * span);
}

}  // namespace mkdv
