#pragma once

#include "mkdv/field.hpp"

#include <span>
#include <vector>

namespace mkdv {

// Unitary centered transform of samples v_j = f(origin + j * step):
//   out_k = (2 pi)^{-1/2} step sum_j v_j e^{-i w_k (origin + j step)},
//   w_k = (k - n/2) * 2 pi / (n step).
// The inverse uses (2 pi)^{-1/2} dw with dw = 2 pi / (n step); they round-trip exactly.
std::vector<cplx> centered_forward(std::span<const cplx> samples, double step, double origin);
std::vector<cplx> centered_inverse(std::span<const cplx> coeffs, double step, double origin);

SpectralField to_frequency(const SpectralField& u);
SpectralField to_physical(const SpectralField& u);

// physical (x, t) -> frequency (xi, tau), and back.
SpaceTimeField to_frequency(const SpaceTimeField& u);
SpaceTimeField to_physical(const SpaceTimeField& u);

// Single-axis conversions: space axis (physical <-> mixed) and time axis (mixed <-> frequency).
SpaceTimeField space_to_frequency(const SpaceTimeField& u);
SpaceTimeField space_to_physical(const SpaceTimeField& u);
SpaceTimeField time_to_frequency(const SpaceTimeField& u);
SpaceTimeField time_to_physical(const SpaceTimeField& u);

// Row j of a mixed-layout field as a SpectralField u^(., t_j).
SpectralField time_slice(const SpaceTimeField& u, std::size_t j);

}  // namespace mkdv
