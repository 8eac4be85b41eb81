#include "mkdv/profile.hpp"

#include "mkdv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mkdv {

cplx FrequencyAtom::value(double xi) const
{
    const double d = (xi - centre) / width;
    return amplitude * std::exp(-0.5 * d * d);
}

cplx FrequencyAtom::physical(double x) const
{
    return amplitude * width * std::polar(std::exp(-0.5 * width * width * x * x), centre * x);
}

cplx Profile1D::value(double xi) const
{
    cplx acc = 0.0;
    for (const auto& a : atoms) acc += a.value(xi);
    return acc;
}

cplx Profile1D::physical(double x) const
{
    cplx acc = 0.0;
    for (const auto& a : atoms) acc += a.physical(x);
    return acc;
}

Profile1D Profile1D::dilated(double lambda) const
{
    if (!(lambda > 0.0)) throw ParameterError("dilation must be positive");
    Profile1D out;
    for (const auto& a : atoms)
        out.atoms.push_back({a.centre * lambda, a.width * lambda, a.amplitude / std::sqrt(lambda)});
    return out;
}

double Profile1D::band(double rel) const
{
    const double k = std::sqrt(2.0 * std::log(1.0 / rel));
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, std::abs(a.centre) + k * a.width);
    return m;
}

double Profile1D::spatial_extent(double rel) const
{
    const double k = std::sqrt(2.0 * std::log(1.0 / rel));
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, k / a.width);
    return m;
}

double Profile1D::min_width() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) m = std::min(m, a.width);
    return m;
}

double Profile1D::max_centre() const
{
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, std::abs(a.centre));
    return m;
}

SpectralField Profile1D::sample(const Grid1D& grid, bool keep_zero_mode) const
{
    std::vector<cplx> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = value(grid.xi(k));
    if (!keep_zero_mode) v[grid.zero_index()] = 0.0;
    return SpectralField(grid, std::move(v), Layout1D::frequency);
}

cplx TimeAtom::value(double t) const
{
    const double d = omega * (t - t_centre);
    return amplitude * std::polar(std::exp(-0.5 * d * d), nu * t);
}

cplx TimeAtom::hat(double tau) const
{
    const double d = (tau - nu) / omega;
    return (amplitude / omega) * std::polar(std::exp(-0.5 * d * d), -(tau - nu) * t_centre);
}

TimeAtom TimeAtom::dilated(double lambda) const
{
    const double l3 = lambda * lambda * lambda;
    return {omega * l3, t_centre / l3, nu * l3, amplitude};
}

TimeAtom TimeAtom::operator*(const TimeAtom& o) const
{
    const double a2 = omega * omega;
    const double b2 = o.omega * o.omega;
    const double w2 = a2 + b2;
    const double c = (a2 * t_centre + b2 * o.t_centre) / w2;
    const double d = t_centre - o.t_centre;
    const double k = std::exp(-0.5 * a2 * b2 / w2 * d * d);
    return {std::sqrt(w2), c, nu + o.nu, amplitude * o.amplitude * k};
}

double TimeAtom::support_radius(double rel) const { return std::sqrt(2.0 * std::log(1.0 / rel)) / omega; }

cplx SpaceTimeProfile::mixed(double xi, double t) const
{
    cplx acc = 0.0;
    const double x3 = xi * xi * xi;
    for (const auto& a : atoms)
        acc += a.space.value(xi) * a.time.value(t) * std::polar(1.0, a.gamma * t * x3);
    return acc;
}

cplx SpaceTimeProfile::interaction(double xi, double t) const
{
    return mixed(xi, t) * std::polar(1.0, -t * xi * xi * xi);
}

cplx SpaceTimeProfile::hat(double xi, double tau) const
{
    cplx acc = 0.0;
    const double x3 = xi * xi * xi;
    for (const auto& a : atoms) acc += a.space.value(xi) * a.time.hat(tau - a.gamma * x3);
    return acc;
}

cplx SpaceTimeProfile::interaction_hat(double xi, double sigma) const
{
    return hat(xi, sigma + xi * xi * xi);
}

SpaceTimeProfile SpaceTimeProfile::dilated(double lambda) const
{
    SpaceTimeProfile out;
    for (const auto& a : atoms) out.atoms.push_back({a.space.dilated(lambda), a.time.dilated(lambda), a.gamma});
    return out;
}

double SpaceTimeProfile::band(double rel) const
{
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, a.space.band(rel));
    return m;
}

double SpaceTimeProfile::spatial_extent(double rel) const
{
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, a.space.spatial_extent(rel));
    return m;
}

double SpaceTimeProfile::min_width() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) m = std::min(m, a.space.min_width());
    return m;
}

double SpaceTimeProfile::min_omega() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) m = std::min(m, a.time.omega);
    return m;
}

double SpaceTimeProfile::max_omega() const
{
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, a.time.omega);
    return m;
}

std::pair<double, double> SpaceTimeProfile::time_window(double rel) const
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& a : atoms) {
        const double r = a.time.support_radius(rel);
        lo = std::min(lo, a.time.t_centre - r);
        hi = std::max(hi, a.time.t_centre + r);
    }
    return {lo, hi};
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t sample_id, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(sample_id), static_cast<std::uint32_t>(sample_id >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Profile1D random_profile(const FamilySpec& spec, std::mt19937_64& rng)
{
    if (spec.atoms_min == 0 || spec.atoms_max < spec.atoms_min) throw ParameterError("bad atom count range");
    if (!(spec.width_min > 0.0) || spec.width_max < spec.width_min) throw ParameterError("bad width range");
    const auto n = std::uniform_int_distribution<std::size_t>(spec.atoms_min, spec.atoms_max)(rng);
    Profile1D p;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = uniform(rng, -spec.centre_max, spec.centre_max);
        const double w = uniform(rng, spec.width_min, spec.width_max);
        const double mag = uniform(rng, 0.5, 1.5);
        const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        p.atoms.push_back({c, w, std::polar(mag, phase)});
        if (spec.real) p.atoms.push_back({-c, w, std::polar(mag, -phase)});
    }
    return p;
}

TimeAtom random_time_atom(const FamilySpec& spec, std::mt19937_64& rng)
{
    return {uniform(rng, spec.omega_min, spec.omega_max), uniform(rng, -spec.t_centre_max, spec.t_centre_max),
            uniform(rng, -spec.nu_max, spec.nu_max), 1.0};
}

SpaceTimeProfile random_space_time_profile(const FamilySpec& spec, std::mt19937_64& rng)
{
    if (spec.gammas.empty()) throw ParameterError("family needs at least one dispersion sign");
    const auto n = std::uniform_int_distribution<std::size_t>(spec.atoms_min, spec.atoms_max)(rng);
    FamilySpec one = spec;
    one.atoms_min = one.atoms_max = 1;
    SpaceTimeProfile p;
    for (std::size_t i = 0; i < n; ++i) {
        Profile1D space = random_profile(one, rng);
        TimeAtom time = random_time_atom(spec, rng);
        const auto gi = std::uniform_int_distribution<std::size_t>(0, spec.gammas.size() - 1)(rng);
        p.atoms.push_back({std::move(space), time, spec.gammas[gi]});
    }
    return p;
}

std::size_t nice_size(std::size_t n)
{
    if (n < 8) n = 8;
    for (std::size_t m = n + (n % 2);; m += 2) {
        std::size_t r = m;
        for (std::size_t f : {2u, 3u, 5u})
            while (r % f == 0) r /= f;
        if (r == 1) return m;
    }
}

}  // namespace mkdv
