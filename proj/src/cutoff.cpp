#include "mkdv/cutoff.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/norms.hpp"
#include "mkdv/transform.hpp"

#include <cmath>

namespace mkdv {

namespace {

double f(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = f(x);
    return a / (a + f(1.0 - x));
}

Cutoff::Cutoff(double scale) : scale_(scale)
{
    if (!(scale > 0.0)) throw ParameterError("cutoff scale must be positive");
}

double Cutoff::operator()(double t) const { return smooth_step(2.0 - std::abs(t) / scale_); }

double cutoff_norm(const Cutoff& psi, double r, double b, double half_span, std::size_t n)
{
    Grid1D g(half_span, n);
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = psi(g.x(j));
    const SpectralField f = to_frequency(SpectralField(g, std::move(v), Layout1D::physical));
    // same modulation quadrature as the space-time norms, so identities between them stay exact
    const double rp = conjugate_exponent(r);
    const double h = f.grid().dxi();
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k)
        a[k] = std::pow(modulation_weight(f.grid().xi(k), h, b * rp), 1.0 / rp) * std::abs(f[k]);
    return weighted_lp(a, h, rp);
}

}  // namespace mkdv
