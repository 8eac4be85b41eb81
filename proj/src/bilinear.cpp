#include "mkdv/bilinear.hpp"

#include "mkdv/errors.hpp"

#include <cmath>
#include <numbers>

namespace mkdv {

namespace {

void require_pair(const SpectralField& f, const SpectralField& g)
{
    if (!(f.grid() == g.grid())) throw ShapeError("bilinear operands live on different grids");
    if (f.layout() != Layout1D::frequency || g.layout() != Layout1D::frequency)
        throw LayoutError("bilinear operators act on frequency-layout fields");
}

template <class Weight>
SpectralField convolve(const SpectralField& f, const SpectralField& g, double s, Weight weight)
{
    require_pair(f, g);
    if (s < 0.0) throw ParameterError("bilinear weight exponent s must be >= 0");
    const Grid1D& grid = f.grid();
    const long n = static_cast<long>(grid.size());
    const long h = n / 2;
    const double pref = grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
    std::vector<cplx> out(grid.size());
    for (long k = 0; k < n; ++k) {
        const long m = k - h;  // xi = m dxi
        cplx acc = 0.0;
        for (long k1 = 0; k1 < n; ++k1) {
            const long m1 = k1 - h;
            const long m2 = m - m1;
            const long k2 = m2 + h;
            if (k2 < 0 || k2 >= n) continue;
            const cplx term = f[static_cast<std::size_t>(k1)] * g[static_cast<std::size_t>(k2)];
            if (term == 0.0) continue;
            const double w = s == 0.0 ? 1.0 : std::pow(std::abs(weight(m, m1, m2)) * grid.dxi(), s);
            acc += w * term;
        }
        out[static_cast<std::size_t>(k)] = pref * acc;
    }
    return SpectralField(grid, std::move(out), Layout1D::frequency);
}

}  // namespace

SpectralField i_minus(const SpectralField& f, const SpectralField& g, double s)
{
    return convolve(f, g, s, [](long, long m1, long m2) { return static_cast<double>(m1 - m2); });
}

SpectralField i_plus(const SpectralField& f, const SpectralField& g, double s)
{
    return convolve(f, g, s, [](long m, long, long m2) { return static_cast<double>(m + m2); });
}

SpectralField conjugate_field(const SpectralField& u)
{
    if (u.layout() != Layout1D::frequency) throw LayoutError("conjugate_field needs frequency layout");
    const std::size_t n = u.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 1; k < n; ++k) out[k] = std::conj(u[n - k]);
    return SpectralField(u.grid(), std::move(out), Layout1D::frequency);
}

SpectralField m_operator(const SpectralField& u, const SpectralField& v, double s) { return i_minus(u, v, s); }

SpectralField n_operator(const SpectralField& u, const SpectralField& w, double s)
{
    return i_plus(w, conjugate_field(u), s);
}

cplx inner(const SpectralField& f, const SpectralField& g)
{
    require_pair(f, g);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * std::conj(g[k]);
    return acc * f.grid().dxi();
}

std::array<Rational, 3> resonance_polynomial(const Rational& xi, const Rational& xi1)
{
    // 3 xi (x^2 - xi x + xi xi1 - xi1^2)
    const Rational c = Rational(3) * xi;
    return {c * (xi * xi1 - xi1 * xi1), -c * xi, c};
}

ResonanceData<Rational> resonance_data(const Rational& xi, const Rational& xi1)
{
    if (xi == Rational(0)) throw DegenerateResonanceError("xi = 0: the resonance function vanishes identically");
    if (Rational(2) * xi1 == xi) throw DegenerateResonanceError("2 xi1 = xi: the two zeros coincide");
    const Rational w = Rational(3) * abs(xi) * abs(Rational(2) * xi1 - xi);
    return {xi, xi1, {xi1, xi - xi1}, {w, w}};
}

ResonanceData<double> resonance_data(double xi, double xi1)
{
    if (xi == 0.0) throw DegenerateResonanceError("xi = 0: the resonance function vanishes identically");
    if (2.0 * xi1 == xi) throw DegenerateResonanceError("2 xi1 = xi: the two zeros coincide");
    const double w = 3.0 * std::abs(xi) * std::abs(2.0 * xi1 - xi);
    return {xi, xi1, {xi1, xi - xi1}, {w, w}};
}

Rational resonance_cubic(const Rational& xi, const Rational& xi1, const Rational& eta1)
{
    const Rational xi2 = xi - xi1;
    const Rational eta2 = xi - eta1;
    return xi1 * xi1 * xi1 + xi2 * xi2 * xi2 - eta1 * eta1 * eta1 - eta2 * eta2 * eta2;
}

Rational resonance_factored(const Rational& xi, const Rational& xi1, const Rational& eta1)
{
    return Rational(3) * xi * (xi1 * xi1 - eta1 * eta1 + xi * (eta1 - xi1));
}

Lemma3Value lemma3_closed_form(const SpectralField& u1, const SpectralField& u2)
{
    require_pair(u1, u2);
    const Grid1D& grid = u1.grid();
    if (grid.representation() != Representation::quadrature)
        throw LayoutError("lemma3_closed_form needs quadrature-mode fields");
    const std::size_t z = grid.zero_index();
    if (u1[z] != 0.0 || u2[z] != 0.0) throw DomainError("lemma3_closed_form needs an empty zero mode");

    const long n = static_cast<long>(grid.size());
    const long h = n / 2;
    const double d2 = grid.dxi() * grid.dxi();
    double diag = 0.0;
    cplx cross = 0.0;
    double l1 = 0.0;
    std::size_t degenerate = 0;
    for (long k = 0; k < n; ++k) {
        const long m = k - h;
        for (long k1 = 0; k1 < n; ++k1) {
            const long m2 = m - (k1 - h);
            const long k2 = m2 + h;
            if (k2 < 0 || k2 >= n) continue;
            const auto a = static_cast<std::size_t>(k1);
            const auto b = static_cast<std::size_t>(k2);
            if (m == 0 || 2 * (k1 - h) == m) ++degenerate;
            diag += std::norm(u1[a]) * std::norm(u2[b]);
            cross += u1[a] * std::conj(u1[b]) * u2[b] * std::conj(u2[a]);
        }
    }
    for (long k = 0; k < n; ++k) l1 += std::abs(u1[static_cast<std::size_t>(k)] * u2[static_cast<std::size_t>(k)]);
    l1 *= grid.dxi();
    const double c = Lemma3Value::constant;
    Lemma3Value v{};
    v.diagonal = c * d2 * diag;
    v.cross = c * d2 * cross;
    v.cross_modulus = std::abs(v.cross);
    v.cross_bound = c * l1 * l1;
    v.value = v.diagonal + v.cross.real();
    v.degenerate_samples = degenerate;
    return v;
}

}  // namespace mkdv
