#include "mkdv/field.hpp"

#include "mkdv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mkdv {

bool hermitian(std::span<const cplx> c, double tol)
{
    const std::size_t n = c.size();
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    const double bound = tol * std::max(scale, 1e-300);
    if (std::abs(c[0].imag()) > bound || std::abs(c[n / 2].imag()) > bound) return false;
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(c[n - k] - std::conj(c[k])) > bound) return false;
    return true;
}

namespace {

bool detect_real(std::span<const cplx> c, Layout1D layout)
{
    if (layout == Layout1D::frequency) return hermitian(c);
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    return std::all_of(c.begin(), c.end(),
                       [&](const cplx& v) { return std::abs(v.imag()) <= 1e-12 * std::max(scale, 1e-300); });
}

void require_same(const Grid1D& a, const Grid1D& b, Layout1D la, Layout1D lb)
{
    if (!(a == b)) throw ShapeError("fields live on different grids");
    if (la != lb) throw LayoutError("fields have different layouts");
}

}  // namespace

SpectralField::SpectralField(Grid1D grid, std::vector<cplx> coeffs, Layout1D layout)
    : grid_(grid), coeffs_(std::move(coeffs)), layout_(layout)
{
    if (coeffs_.size() != grid_.size())
        throw ShapeError("field has " + std::to_string(coeffs_.size()) + " samples for a grid of " +
                         std::to_string(grid_.size()));
    real_ = detect_real(coeffs_, layout_);
}

SpectralField SpectralField::zeros(Grid1D grid, Layout1D layout)
{
    return SpectralField(grid, std::vector<cplx>(grid.size()), layout);
}

SpectralField SpectralField::scaled(cplx factor) const
{
    std::vector<cplx> out(coeffs_);
    for (auto& v : out) v *= factor;
    return SpectralField(grid_, std::move(out), layout_);
}

SpectralField SpectralField::plus(const SpectralField& other) const
{
    require_same(grid_, other.grid_, layout_, other.layout_);
    std::vector<cplx> out(coeffs_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += other.coeffs_[k];
    return SpectralField(grid_, std::move(out), layout_);
}

SpectralField SpectralField::minus(const SpectralField& other) const
{
    return plus(other.scaled(-1.0));
}

SpaceTimeField::SpaceTimeField(SpaceTimeGrid grid, std::vector<cplx> coeffs, Layout2D layout)
    : grid_(grid), coeffs_(std::move(coeffs)), layout_(layout)
{
    if (coeffs_.size() != grid_.points())
        throw ShapeError("space-time field shape does not match its grid");
}

SpaceTimeField SpaceTimeField::zeros(SpaceTimeGrid grid, Layout2D layout)
{
    return SpaceTimeField(grid, std::vector<cplx>(grid.points()), layout);
}

std::span<const cplx> SpaceTimeField::row(std::size_t j) const
{
    const std::size_t n = grid_.space().size();
    return std::span<const cplx>(coeffs_).subspan(j * n, n);
}

SpaceTimeField SpaceTimeField::scaled(cplx factor) const
{
    std::vector<cplx> out(coeffs_);
    for (auto& v : out) v *= factor;
    return SpaceTimeField(grid_, std::move(out), layout_);
}

SpaceTimeField SpaceTimeField::plus(const SpaceTimeField& other) const
{
    if (!(grid_ == other.grid_)) throw ShapeError("space-time fields live on different grids");
    if (layout_ != other.layout_) throw LayoutError("space-time fields have different layouts");
    std::vector<cplx> out(coeffs_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += other.coeffs_[k];
    return SpaceTimeField(grid_, std::move(out), layout_);
}

SpaceTimeField SpaceTimeField::minus(const SpaceTimeField& other) const
{
    return plus(other.scaled(-1.0));
}

}  // namespace mkdv
