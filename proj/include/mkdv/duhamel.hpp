#pragma once

#include "mkdv/field.hpp"

#include <span>
#include <string>
#include <vector>

namespace mkdv {

// Composite trapezoid primitive G(t_j) = int_{t_origin}^{t_j} g, integrated
// outward from sample `origin` in both directions; G(origin) = 0 exactly.
std::vector<cplx> cumulative_trapezoid(std::span<const cplx> g, double dt, std::size_t origin);

// Same primitive, fourth order: each step integrates the cubic through the four
// nearest samples (one-sided at the ends). Needs at least 4 samples.
std::vector<cplx> cumulative_cubic(std::span<const cplx> g, double dt, std::size_t origin);

enum class DuhamelRule { trapezoid, cubic };

struct DuhamelResult {
    SpaceTimeField value;       // mixed layout, same grid as F
    double error_estimate;      // Richardson estimate (step vs double step) relative to max |v|
    bool resolution_warning;    // error_estimate above the requested tolerance
    std::string note;
};

// v(t) = int_0^t U(t - t') F(t') dt' for a mixed-layout F. t = 0 must be a
// grid point; the window may extend to negative times.
DuhamelResult duhamel_integral(const SpaceTimeField& F, double tolerance = 1e-8,
                               DuhamelRule rule = DuhamelRule::trapezoid);

// Index of t = 0 on the grid, or a ParameterError if it is not a grid point.
std::size_t origin_index(const SpaceTimeGrid& g);

}  // namespace mkdv
