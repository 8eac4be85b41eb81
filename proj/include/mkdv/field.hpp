#pragma once

#include "mkdv/fft.hpp"
#include "mkdv/grid.hpp"

#include <span>
#include <vector>

namespace mkdv {

enum class Layout1D { physical, frequency };

// Samples of a 1-D function, either u(x_j) or its unitary transform u^(xi_k)
// (centered ordering, index n/2 is xi = 0). Immutable once built.
class SpectralField {
public:
    SpectralField(Grid1D grid, std::vector<cplx> coeffs, Layout1D layout = Layout1D::frequency);

    static SpectralField zeros(Grid1D grid, Layout1D layout = Layout1D::frequency);

    const Grid1D& grid() const { return grid_; }
    Layout1D layout() const { return layout_; }
    std::span<const cplx> coeffs() const { return coeffs_; }
    const cplx& operator[](std::size_t k) const { return coeffs_[k]; }
    std::size_t size() const { return coeffs_.size(); }

    // Hermitian symmetry u^(-xi) = conj u^(xi) in frequency layout, or
    // vanishing imaginary part in physical layout, to machine precision.
    bool real_flag() const { return real_; }

    SpectralField scaled(cplx factor) const;
    SpectralField plus(const SpectralField& other) const;
    SpectralField minus(const SpectralField& other) const;

private:
    Grid1D grid_;
    std::vector<cplx> coeffs_;
    Layout1D layout_;
    bool real_;
};

enum class Layout2D { physical, mixed, frequency };

// Samples on a (t or tau) x (x or xi) product grid, row-major with the time
// axis outermost: coeffs[j * n_modes + k].
class SpaceTimeField {
public:
    SpaceTimeField(SpaceTimeGrid grid, std::vector<cplx> coeffs, Layout2D layout);

    static SpaceTimeField zeros(SpaceTimeGrid grid, Layout2D layout);

    const SpaceTimeGrid& grid() const { return grid_; }
    Layout2D layout() const { return layout_; }
    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<const cplx> row(std::size_t j) const;
    const cplx& at(std::size_t j, std::size_t k) const { return coeffs_[j * grid_.space().size() + k]; }

    SpaceTimeField scaled(cplx factor) const;
    SpaceTimeField plus(const SpaceTimeField& other) const;
    SpaceTimeField minus(const SpaceTimeField& other) const;

private:
    SpaceTimeGrid grid_;
    std::vector<cplx> coeffs_;
    Layout2D layout_;
};

bool hermitian(std::span<const cplx> centered, double tol = 1e-12);

}  // namespace mkdv
