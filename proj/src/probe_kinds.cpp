#include "mkdv/probe.hpp"

#include "mkdv/bilinear.hpp"
#include "mkdv/cutoff.hpp"
#include "mkdv/duhamel.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/flow_norm.hpp"
#include "mkdv/multiplier.hpp"
#include "mkdv/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace mkdv {

namespace {

constexpr double pi = std::numbers::pi;
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

// Gaussian atoms are dropped beyond this many widths (e^{-21} relative).
constexpr double atom_reach = 6.5;
// Largest sample count any probe grid may use.
constexpr double max_points = 4.0e6;

double dv(const Rational& q) { return to_double(q); }

std::size_t grid_size(double want, const char* what)
{
    if (!std::isfinite(want) || want > max_points)
        throw RangeError(std::string(what) + ": the dilated family leaves the resolvable band (" +
                         std::to_string(want) + " samples requested)");
    return nice_size(static_cast<std::size_t>(std::ceil(std::max(want, 8.0))));
}

std::pair<double, double> support(const Profile1D& u)
{
    double lo = infinity, hi = -infinity;
    for (const auto& a : u.atoms) {
        lo = std::min(lo, a.centre - atom_reach * a.width);
        hi = std::max(hi, a.centre + atom_reach * a.width);
    }
    return {lo, hi};
}

double reach(const Profile1D& u)
{
    const auto [lo, hi] = support(u);
    return std::max(std::abs(lo), std::abs(hi));
}

double reach(const SpaceTimeProfile& u)
{
    double k = 0.0;
    for (const auto& a : u.atoms) k = std::max(k, reach(a.space));
    return k;
}

double max_nu(const SpaceTimeProfile& u)
{
    double m = 0.0;
    for (const auto& a : u.atoms) m = std::max(m, std::abs(a.time.nu));
    return m;
}

Profile1D profile_for(const ProbeConfig& c, std::size_t id, double lambda, std::uint64_t stream)
{
    auto rng = sample_rng(c.seed, id, stream);
    return random_profile(c.family, rng).dilated(lambda);
}

SpaceTimeProfile st_profile_for(const ProbeConfig& c, std::size_t id, double lambda, std::uint64_t stream)
{
    auto rng = sample_rng(c.seed, id, stream);
    return random_space_time_profile(c.family, rng).dilated(lambda);
}

// Samples of u^ on a quadrature grid resolving its narrowest atom.
SpectralField sample_profile(const Profile1D& u, double res, bool keep_zero_mode)
{
    const double dxi = u.min_width() / 8.0 / res;
    const std::size_t n = grid_size(2.0 * reach(u) / dxi + 4.0, "profile grid");
    return u.sample(Grid1D(pi / dxi, n), keep_zero_mode);
}

// ---------------------------------------------------------------- linear flow

Evaluation eval_flow(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const Profile1D u = profile_for(c, id, lambda, 0);
    const ProbeParams& p = c.params;
    FlowNormOptions opt{};
    double r = dv(p.r);
    switch (c.kind) {
    case EstimateKind::L8_STRICHARTZ:
        opt.p = opt.q = 8.0;
        r = 2.0;
        break;
    case EstimateKind::LEMMA4:
        opt.p = 4.0;
        opt.q = 1.0 / dv(p.inv_q);
        opt.sigma = 0.25;
        break;
    default:  // FS_AIRY, COR3_GENERAL
        opt.p = p.inv_p == Rational{0} ? infinity : 1.0 / dv(p.inv_p);
        opt.q = p.inv_q == Rational{0} ? infinity : 1.0 / dv(p.inv_q);
        opt.sigma = dv(p.inv_p);
        break;
    }
    opt.resolution = res;
    double lhs = 0.0;
    if (std::isinf(opt.p)) {
        // sup over t of the slice norm, sampled on a logarithmic set of times
        const double w = u.min_width();
        const double t_star = 1.0 / (w * w * (6.0 * u.max_centre() + 3.0 * w));
        lhs = flow_slice_norm(u, 0.0, opt);
        for (int k = -8; k <= 6; ++k)
            for (double sgn : {-1.0, 1.0})
                lhs = std::max(lhs, flow_slice_norm(u, sgn * t_star * std::ldexp(1.0, k), opt));
    } else {
        lhs = flow_norm(u, opt).value;
    }
    const double rhs = fl_norm(sample_profile(u, res, true), r, 0.0);
    return {lhs, rhs};
}

// ------------------------------------------------------- space-time sampling

// u^(xi_k, t_j) on a physical window wide enough for every packet over the
// profile's time support. `q_eff` sets how many harmonics of |u|^q the time step resolves.
SpaceTimeField physical_samples(const SpaceTimeProfile& u, double q_eff, double res)
{
    const double K = reach(u);
    const double X0 = u.spatial_extent(1e-8);
    const auto [t_lo, t_hi] = u.time_window(1e-9);
    const double t_abs = std::max(std::abs(t_lo), std::abs(t_hi));
    const double L = 1.1 * (X0 + 3.0 * K * K * t_abs);
    const std::size_t nx = grid_size(2.0 * 1.25 * K * L / pi * res, "space grid");
    double beat = 0.0;
    for (const auto& a : u.atoms)
        beat = std::max(beat, std::abs(a.gamma) * K * K * K + std::abs(a.time.nu) + 8.0 * a.time.omega);
    const double dt = pi / (1.1 * (0.5 * q_eff + 1.0) * beat) / res;
    const std::size_t nt = grid_size((t_hi - t_lo) / dt, "time grid");
    const SpaceTimeGrid grid(Grid1D(L, nx), nt, t_lo, t_hi);
    std::vector<cplx> v(grid.points());
    std::vector<std::vector<cplx>> phi(u.atoms.size(), std::vector<cplx>(nx));
    for (std::size_t a = 0; a < u.atoms.size(); ++a)
        for (std::size_t k = 0; k < nx; ++k) phi[a][k] = u.atoms[a].space.value(grid.space().xi(k));
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = grid.t(j);
        for (std::size_t a = 0; a < u.atoms.size(); ++a) {
            const cplx h = u.atoms[a].time.value(t);
            const double g = u.atoms[a].gamma * t;
            for (std::size_t k = 0; k < nx; ++k) {
                const double xi = grid.space().xi(k);
                v[j * nx + k] += phi[a][k] * h * std::polar(1.0, g * xi * xi * xi);
            }
        }
    }
    return SpaceTimeField(grid, std::move(v), Layout2D::mixed);
}

Evaluation eval_xnorm(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const SpaceTimeProfile u = st_profile_for(c, id, lambda, 0);
    const ProbeParams& pp = c.params;
    const double p = pp.inv_p == Rational{0} ? infinity : 1.0 / dv(pp.inv_p);
    const double q = pp.inv_q == Rational{0} ? infinity : 1.0 / dv(pp.inv_q);
    const double r = dv(pp.r);
    const double b = dv(pp.b);
    const double q_eff = std::isinf(q) ? 8.0 : std::max(q, 2.0);
    const SpaceTimeField F = physical_samples(u, q_eff, res);
    if (c.kind == EstimateKind::XNORM_30) {
        const double lhs = mixed_norm(F, {p, q, dv(pp.inv_p), false});
        return {lhs, profile_x_norm(u, r, 0.0, b, res)};
    }
    // X^{r'}_{0,-b} against L^{p'}_t H^{-1/p, q'}
    const double lhs = profile_x_norm(u, conjugate_exponent(r), 0.0, -b, res);
    const double rhs = mixed_norm(F, {conjugate_exponent(p), conjugate_exponent(q), -dv(pp.inv_p), false});
    return {lhs, rhs};
}

// ------------------------------------------------------------------ bilinear

Evaluation eval_bilinear_identity(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const Profile1D p1 = profile_for(c, id, lambda, 0);
    const Profile1D p2 = profile_for(c, id, lambda, 1);
    const double K = std::max(reach(p1), reach(p2));
    const double dxi = std::min(p1.min_width(), p2.min_width()) / 6.0 / res;
    const Grid1D g(pi / dxi, grid_size(4.0 * K / dxi + 4.0, "bilinear grid"));
    const SpectralField u1 = p1.sample(g);
    const SpectralField u2 = p2.sample(g);
    const Lemma3Value v = lemma3_closed_form(u1, u2);
    return {std::sqrt(std::max(v.value, 0.0)), fl_norm(u1, 2.0, 0.0) * fl_norm(u2, 2.0, 0.0)};
}

// Lattice samples of one atom's spatial profile: phi[m - m_lo] = phi^(m dxi).
struct LatticeAtom {
    const SpaceTimeAtom* atom;
    long m_lo;
    long m_hi;
    std::vector<cplx> phi;
    double peak;
};

LatticeAtom lattice_atom(const SpaceTimeAtom& a, double dxi)
{
    const auto [lo, hi] = support(a.space);
    LatticeAtom la{&a, static_cast<long>(std::floor(lo / dxi)), static_cast<long>(std::ceil(hi / dxi)), {}, 0.0};
    for (long m = la.m_lo; m <= la.m_hi; ++m) {
        la.phi.push_back(a.space.value(static_cast<double>(m) * dxi));
        la.peak = std::max(la.peak, std::abs(la.phi.back()));
    }
    return la;
}

// Adds coef * H^(tau_j - theta) on the tau lattice j dtau (|tau - mu| <= 7 Omega) to
// row[j + j_half], where H is a Gaussian time atom; exponentials by recurrence.
void add_gaussian(cplx* row, long j_half, long n_tau, double dtau, const TimeAtom& H, double theta, cplx coef)
{
    const double om = H.omega;
    const double mu = theta + H.nu;
    const double half = 7.0 * om;
    const long jlo = std::max(static_cast<long>(std::ceil((mu - half) / dtau)), -j_half);
    const long jhi = std::min(static_cast<long>(std::floor((mu + half) / dtau)), n_tau - 1 - j_half);
    if (jhi < jlo) return;
    const double x0 = static_cast<double>(jlo) * dtau - mu;
    const double s2 = 1.0 / (2.0 * om * om);
    cplx v = coef * (H.amplitude / om) * std::polar(std::exp(-x0 * x0 * s2), -x0 * H.t_centre);
    cplx rho = std::polar(std::exp(-(2.0 * x0 * dtau + dtau * dtau) * s2), -dtau * H.t_centre);
    const double q = std::exp(-2.0 * dtau * dtau * s2);
    for (long j = jlo; j <= jhi; ++j) {
        row[j + j_half] += v;
        v *= rho;
        rho *= q;
    }
}

// Turns xi-major accumulators acc[k * nt + j] into a (xi, tau) frequency-layout field.
SpaceTimeField to_field(const std::vector<cplx>& acc, std::size_t nx, std::size_t nt, double dxi, double dtau)
{
    const SpaceTimeGrid grid(Grid1D(pi / dxi, nx), nt, -pi / dtau, pi / dtau);
    std::vector<cplx> v(nx * nt);
    for (std::size_t k = 0; k < nx; ++k)
        for (std::size_t j = 0; j < nt; ++j) v[j * nx + k] = acc[k * nt + j];
    return SpaceTimeField(grid, std::move(v), Layout2D::frequency);
}

// B^(xi, tau) for B(t) = (2 pi)^{-1/2} int dxi1 K(xi1, xi2) f^(xi1, t) g^(xi2, t), xi2 = xi - xi1,
// assembled atom pair by atom pair: each (xi1, xi2) node contributes the
// Gaussian H_ab^(tau - gamma_a xi1^3 - gamma_b xi2^3) of the product time atom.
template <class Kernel>
SpaceTimeField bilinear_hat(const SpaceTimeProfile& f, const SpaceTimeProfile& g, Kernel kernel, double res)
{
    const double K = std::max(reach(f), reach(g));
    const double wmin = std::min(f.min_width(), g.min_width());
    double om_min = infinity, slope = 3.0 * K * K, R = 0.0;
    for (const auto& a : f.atoms)
        for (const auto& b : g.atoms) {
            const TimeAtom H = a.time * b.time;
            om_min = std::min(om_min, H.omega);
            const double ga = std::abs(a.gamma) + std::abs(b.gamma);
            slope = std::max(slope, 3.0 * K * K * ga);
            R = std::max(R, ga * K * K * K + std::abs(H.nu) + 7.0 * H.omega);
        }
    const double dxi = std::min(wmin / 6.0, om_min / (3.0 * slope)) / res;
    const double dtau = om_min / 6.0 / res;

    std::vector<LatticeAtom> fa, ga;
    for (const auto& a : f.atoms) fa.push_back(lattice_atom(a, dxi));
    for (const auto& b : g.atoms) ga.push_back(lattice_atom(b, dxi));
    long m_out = 0;
    for (const auto& a : fa)
        for (const auto& b : ga) m_out = std::max({m_out, std::abs(a.m_lo + b.m_lo), std::abs(a.m_hi + b.m_hi)});
    const std::size_t nx = static_cast<std::size_t>(2 * (m_out + 1));
    const long j_half = static_cast<long>(std::ceil(R / dtau)) + 1;
    const std::size_t nt = static_cast<std::size_t>(2 * j_half);
    if (static_cast<double>(nx) * static_cast<double>(nt) > max_points)
        throw RangeError("bilinear probe: the dilated family leaves the resolvable band");

    std::vector<cplx> acc(nx * nt);
    const long x_half = static_cast<long>(nx / 2);
    for (const auto& a : fa)
        for (const auto& b : ga) {
            const TimeAtom H = a.atom->time * b.atom->time;
            const double cut = 1e-13 * a.peak * b.peak;
            for (long m1 = a.m_lo; m1 <= a.m_hi; ++m1) {
                const cplx p1 = a.phi[static_cast<std::size_t>(m1 - a.m_lo)];
                const double x1 = static_cast<double>(m1) * dxi;
                const double th1 = a.atom->gamma * x1 * x1 * x1;
                for (long m2 = b.m_lo; m2 <= b.m_hi; ++m2) {
                    const cplx p2 = b.phi[static_cast<std::size_t>(m2 - b.m_lo)];
                    if (std::abs(p1) * std::abs(p2) < cut) continue;
                    const double x2 = static_cast<double>(m2) * dxi;
                    const double w = kernel(x1, x2);
                    if (w == 0.0) continue;
                    const double th = th1 + b.atom->gamma * x2 * x2 * x2;
                    cplx* row = acc.data() + static_cast<std::size_t>(m1 + m2 + x_half) * nt;
                    add_gaussian(row, j_half, static_cast<long>(nt), dtau, H, th, inv_sqrt_2pi * dxi * w * p1 * p2);
                }
            }
        }
    return to_field(acc, nx, nt, dxi, dtau);
}

Evaluation eval_cor_k(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const ProbeParams& p = c.params;
    const SpaceTimeProfile f = st_profile_for(c, id, lambda, 0);
    const SpaceTimeProfile g = st_profile_for(c, id, lambda, 1);
    if (c.kind == EstimateKind::COR_K1) {
        const double s = dv(p.s);
        const auto B = bilinear_hat(
            f, g, [s](double x1, double x2) { return std::pow(std::abs(x1 + x2), s) * std::pow(std::abs(x1 - x2), s); },
            res);
        const double lhs = hrsb_norm(B, 2.0, 0.0, 0.0);
        return {lhs, profile_x_norm(f, 2.0, 0.0, dv(p.b), res) * profile_x_norm(g, 2.0, 0.0, dv(p.b_tilde), res)};
    }
    // I_+^s(I^s w, u) with w = f, u = g: weight |xi1|^s |xi + xi2|^s
    const double s = c.kind == EstimateKind::COR_K2 ? dv(p.s) : dv(p.sigma);
    const auto B = bilinear_hat(
        f, g, [s](double x1, double x2) { return std::pow(std::abs(x1), s) * std::pow(std::abs(x1 + 2.0 * x2), s); },
        res);
    const double w_l2 = profile_x_norm(f, 2.0, 0.0, 0.0, res);
    if (c.kind == EstimateKind::COR_K2)
        return {xrsb_norm(B, 2.0, 0.0, -dv(p.b_tilde)), w_l2 * profile_x_norm(g, 2.0, 0.0, dv(p.b), res)};
    return {xrsb_norm(B, dv(p.r), 0.0, dv(p.b_prime)), w_l2 * profile_x_norm(g, 2.0, 0.0, dv(p.beta), res)};
}

// ------------------------------------------------------------------- linear

Evaluation eval_delta_power(const ProbeConfig& c, std::size_t id, double delta, double res)
{
    const ProbeParams& p = c.params;
    const SpaceTimeProfile F = st_profile_for(c, id, 1.0, 0);
    const double K = reach(F);
    const double dxi = F.min_width() / 6.0 / res;
    const std::size_t nx = grid_size(2.0 * K / dxi + 4.0, "cut-off Duhamel space grid");
    double fast = 1.0;
    for (const auto& a : F.atoms)
        fast = std::max(fast, a.time.omega + std::abs(a.time.nu) + std::abs(1 - a.gamma) * K * K * K);
    const double dt = std::min(delta / 64.0, 1.0 / (8.0 * fast)) / res;
    const std::size_t nt = grid_size(16.0 * delta / dt, "cut-off Duhamel time grid");
    const SpaceTimeGrid grid(Grid1D(pi / dxi, nx), nt, -8.0 * delta, 8.0 * delta);
    const Cutoff psi = Cutoff(1.0).dilated(delta);
    // only |t| <= 2 delta matters: psi_delta vanishes outside
    const std::size_t origin = nt / 2;
    const auto span = static_cast<std::size_t>(std::ceil(2.0 * delta / grid.dt())) + 1;
    const std::size_t j0 = origin - std::min(span, origin);
    const std::size_t j1 = std::min(origin + span, nt - 1);
    std::vector<cplx> v(grid.points());
    std::vector<cplx> col(j1 - j0 + 1);
    for (std::size_t k = 0; k < nx; ++k) {
        const double xi = grid.space().xi(k);
        for (std::size_t j = j0; j <= j1; ++j) col[j - j0] = F.interaction(xi, grid.t(j));
        const auto prim = cumulative_trapezoid(col, grid.dt(), origin - j0);
        for (std::size_t j = j0; j <= j1; ++j) v[j * nx + k] = psi(grid.t(j)) * prim[j - j0];
    }
    const SpaceTimeField Kg = time_to_frequency(SpaceTimeField(grid, std::move(v), Layout2D::mixed));
    const double r = dv(p.r);
    const double lhs = hrsb_norm(Kg, r, dv(p.s), dv(p.b));
    const double rhs = profile_x_norm(F, r, dv(p.s), dv(p.b_prime), res);
    return {lhs, rhs, std::pow(delta, 1.0 + dv(p.b_prime) - dv(p.b))};
}

Evaluation eval_homog(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const ProbeParams& p = c.params;
    const Profile1D u0 = profile_for(c, id, lambda, 0);
    auto rng = sample_rng(c.seed, id, 7);
    const double a = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
    // the cutoff dilates with the data: x -> x / lambda, t -> t / lambda^3
    const double l3 = lambda * lambda * lambda;
    const Cutoff psi(a / l3);

    // Commensurate grid: 16 modes of spacing dxi, time span 2 pi P / dxi^3 >= 8 / lambda^3,
    // so the Airy lift is an exact cyclic shift of the tau axis.
    constexpr std::size_t modes = 16;
    const double dxi0 = std::max(reach(u0) / (7.0 * lambda), std::cbrt(2.0 * pi / 8.0));
    const auto P = static_cast<std::size_t>(std::max(1.0, std::ceil(8.0 * dxi0 * dxi0 * dxi0 / (2.0 * pi) - 1e-9)));
    const double dxi = lambda * dxi0;
    const double dtau = dxi * dxi * dxi / static_cast<double>(P);
    const double tau_psi = 1500.0 * l3 / a;
    const std::size_t nt =
        grid_size(2.0 * (512.0 * static_cast<double>(P) + tau_psi / dtau) * res, "homogeneous time grid");
    const SpaceTimeGrid grid = commensurate_grid(dxi, modes, P, nt);
    const SpectralField u = u0.sample(grid.space());

    std::vector<cplx> v(grid.points());
    const auto n = static_cast<long long>(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const double w = psi(grid.t(j));
        if (w == 0.0) continue;
        const long long jj = static_cast<long long>(j) - n / 2;
        for (std::size_t k = 0; k < modes; ++k) {
            // t_j xi_k^3 = 2 pi k^3 P (j - n/2) / n, reduced exactly mod 2 pi
            const long long m = static_cast<long long>(grid.space().mode(k));
            long long e = (m * m * m * static_cast<long long>(P)) % n;
            e = (e * (jj % n)) % n;
            v[j * modes + k] = w * std::polar(1.0, 2.0 * pi * static_cast<double>(e) / static_cast<double>(n)) * u[k];
        }
    }
    const SpaceTimeField F = time_to_frequency(SpaceTimeField(grid, std::move(v), Layout2D::mixed));
    const double r = dv(p.r), s = dv(p.s), b = dv(p.b);
    const double lhs = xrsb_norm(F, r, s, b);
    const double c_psi = cutoff_norm(psi, r, b, 0.5 * grid.span(), nt);
    return {lhs, c_psi * fl_norm(u, r, s)};
}

// ----------------------------------------------------------------- embeddings

Evaluation eval_embed4(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const ProbeParams& p = c.params;
    const SpaceTimeProfile u = st_profile_for(c, id, lambda, 0);
    return {profile_x_norm(u, dv(p.r0), dv(p.s0), dv(p.b0), res),
            profile_x_norm(u, dv(p.r1), dv(p.s1), dv(p.b1), res)};
}

Evaluation eval_embed52(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const ProbeParams& p = c.params;
    const double r = dv(p.r), s = dv(p.s);
    const SpaceTimeProfile u = st_profile_for(c, id, lambda, 0);
    const double K = reach(u);
    const double dxi = u.min_width() / 6.0 / res;
    const std::size_t nx = grid_size(2.0 * K / dxi + 4.0, "embedding space grid");
    const Grid1D g(pi / dxi, nx);
    const auto [t_lo, t_hi] = u.time_window(1e-6);
    const double beat = 2.0 * K * K * K + 2.0 * max_nu(u) + 2.0 * u.max_omega();
    const double dt = 1.0 / (4.0 * beat) / res;
    const std::size_t nt = grid_size((t_hi - t_lo) / dt + 1.0, "embedding time grid");
    double sup = 0.0;
    std::vector<cplx> row(nx);
    for (std::size_t j = 0; j <= nt; ++j) {
        const double t = t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(nt);
        for (std::size_t k = 0; k < nx; ++k) row[k] = u.mixed(g.xi(k), t);
        sup = std::max(sup, fl_norm(SpectralField(g, row), r, s));
    }
    return {sup, profile_x_norm(u, r, s, dv(p.b), res)};
}

// ----------------------------------------------------------------- trilinear

Evaluation eval_trilinear(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    const ProbeParams& p = c.params;
    const double r = dv(p.r), s = dv(p.s), b = dv(p.b), bp = dv(p.b_prime);
    std::array<SpaceTimeProfile, 3> u;
    for (std::size_t i = 0; i < 3; ++i) u[i] = st_profile_for(c, id, lambda, i);
    const double rhs = profile_x_norm(u[0], r, s, b, res) * profile_x_norm(u[1], r, s, b, res) *
                       profile_x_norm(u[2], r, s, b, res);

    double K = 0.0, X0 = 0.0, t_lo = -infinity, t_hi = infinity, nu = 0.0, om = 0.0;
    for (const auto& v : u) {
        K = std::max(K, reach(v));
        X0 = std::max(X0, v.spatial_extent(1e-9));
        const auto [lo, hi] = v.time_window(1e-10);
        t_lo = std::max(t_lo, lo);
        t_hi = std::min(t_hi, hi);
        nu += max_nu(v);
        om = std::max(om, v.max_omega());
    }
    if (!(t_hi > t_lo)) return {0.0, rhs};
    const double t_abs = std::max(std::abs(t_lo), std::abs(t_hi));
    const double L = 1.1 * (X0 + 3.0 * K * K * t_abs);
    // the product has band 3K; xi_max >= 3.2K keeps it alias-free
    const std::size_t nx = grid_size(2.0 * 3.2 * K * L / pi * res, "trilinear space grid");
    const double S = 30.0 * K * K * K + nu + 8.0 * std::sqrt(3.0) * om;
    const double dt = pi / (1.1 * S) / res;
    const std::size_t nt = grid_size((t_hi - t_lo) / dt, "trilinear time grid");
    if (static_cast<double>(nx) * static_cast<double>(nt) > max_points)
        throw RangeError("trilinear probe: the dilated family leaves the resolvable band");
    const SpaceTimeGrid grid(Grid1D(L, nx), nt, t_lo, t_hi);
    const Grid1D& sg = grid.space();

    std::array<std::vector<std::vector<cplx>>, 3> phi;
    for (std::size_t i = 0; i < 3; ++i)
        for (const auto& a : u[i].atoms) {
            std::vector<cplx> col(nx);
            for (std::size_t k = 0; k < nx; ++k) col[k] = a.space.value(sg.xi(k));
            phi[i].push_back(std::move(col));
        }
    std::vector<cplx> out(grid.points());
    std::vector<cplx> E(nx), row(nx), prod(nx);
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = grid.t(j);
        for (std::size_t k = 0; k < nx; ++k) {
            const double xi = sg.xi(k);
            E[k] = std::polar(1.0, t * xi * xi * xi);
        }
        std::fill(prod.begin(), prod.end(), cplx{1.0});
        for (std::size_t i = 0; i < 3; ++i) {
            std::fill(row.begin(), row.end(), cplx{});
            for (std::size_t a = 0; a < u[i].atoms.size(); ++a) {
                const auto& at = u[i].atoms[a];
                const cplx h = at.time.value(t);
                for (std::size_t k = 0; k < nx; ++k) {
                    const cplx e = at.gamma == 1 ? E[k] : at.gamma == -1 ? std::conj(E[k]) : cplx{1.0};
                    row[k] += phi[i][a][k] * h * e;
                }
            }
            const auto phys = centered_inverse(row, sg.dx(), -L);
            for (std::size_t k = 0; k < nx; ++k) prod[k] *= phys[k];
        }
        const auto hat = centered_forward(prod, sg.dx(), -L);
        for (std::size_t k = 0; k < nx; ++k) out[j * nx + k] = cplx{0.0, sg.xi(k)} * hat[k];
    }
    const double lhs = xrsb_norm_mixed(SpaceTimeField(grid, std::move(out), Layout2D::mixed), r, s, bp, 2);
    return {lhs, rhs};
}

}  // namespace

double profile_x_norm(const SpaceTimeProfile& u, double r, double s, double b, double resolution)
{
    if (u.atoms.empty()) return 0.0;
    const double rp = conjugate_exponent(r);
    double lo = infinity, hi = -infinity;
    for (const auto& a : u.atoms) {
        const auto [l, h] = support(a.space);
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    const double dxi = u.min_width() / 6.0 / resolution;
    const double dsig = u.min_omega() / 8.0 / resolution;
    const auto m_lo = static_cast<long>(std::floor(lo / dxi));
    const auto m_hi = static_cast<long>(std::ceil(hi / dxi));
    if (static_cast<double>(m_hi - m_lo) > max_points) throw RangeError("profile norm: band out of range");

    // Per xi, sum over the union of the sigma windows where some atom lives.
    std::vector<std::pair<long, long>> iv;
    std::vector<double> vals;
    for (long m = m_lo; m <= m_hi; ++m) {
        const double xi = static_cast<double>(m) * dxi;
        iv.clear();
        for (const auto& a : u.atoms) {
            const double centre = a.time.nu - (1 - a.gamma) * xi * xi * xi;
            const double half = 8.0 * a.time.omega;
            iv.emplace_back(static_cast<long>(std::ceil((centre - half) / dsig)),
                            static_cast<long>(std::floor((centre + half) / dsig)));
        }
        std::sort(iv.begin(), iv.end());
        const double wx = std::pow(japanese(xi), s);
        long next = std::numeric_limits<long>::min();
        for (const auto& [a0, a1] : iv) {
            for (long j = std::max(a0, next); j <= a1; ++j) {
                const double sig = static_cast<double>(j) * dsig;
                const double v = wx * std::pow(modulation_weight(sig, dsig, b * rp), 1.0 / rp) *
                                 std::abs(u.interaction_hat(xi, sig));
                vals.push_back(v);
            }
            next = std::max(next, a1 + 1);
        }
    }
    return weighted_lp(vals, dxi * dsig, rp);
}

Evaluation evaluate_kind(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    switch (c.kind) {
    case EstimateKind::L8_STRICHARTZ:
    case EstimateKind::LEMMA4:
    case EstimateKind::FS_AIRY:
    case EstimateKind::COR3_GENERAL:
        return eval_flow(c, id, lambda, res);
    case EstimateKind::XNORM_30:
    case EstimateKind::XNORM_31:
        return eval_xnorm(c, id, lambda, res);
    case EstimateKind::BILINEAR_L3:
        return eval_bilinear_identity(c, id, lambda, res);
    case EstimateKind::COR_K1:
    case EstimateKind::COR_K2:
    case EstimateKind::COR_K10:
        return eval_cor_k(c, id, lambda, res);
    case EstimateKind::LEMMA2_DELTA:
        return eval_delta_power(c, id, lambda, res);
    case EstimateKind::HOMOG_5:
        return eval_homog(c, id, lambda, res);
    case EstimateKind::EMBED_4:
        return eval_embed4(c, id, lambda, res);
    case EstimateKind::EMBED_52:
        return eval_embed52(c, id, lambda, res);
    case EstimateKind::TRILINEAR_T2:
        return eval_trilinear(c, id, lambda, res);
    }
    throw ParameterError("unknown estimate kind");
}

RegionRatios trilinear_regions(const ProbeConfig& c, std::size_t id, double lambda, double res)
{
    if (c.kind != EstimateKind::TRILINEAR_T2) throw ParameterError("region split applies to TRILINEAR_T2 only");
    const ProbeParams& p = c.params;
    const double s = dv(p.s), bp = dv(p.b_prime), r = dv(p.r);
    std::array<SpaceTimeProfile, 3> u;
    for (std::size_t i = 0; i < 3; ++i) u[i] = st_profile_for(c, id, lambda, i);

    double K = 0.0, wmin = infinity, om_min = infinity, R = 0.0;
    for (const auto& v : u) {
        K = std::max(K, reach(v));
        wmin = std::min(wmin, v.min_width());
    }
    for (const auto& a : u[0].atoms)
        for (const auto& b : u[1].atoms)
            for (const auto& d : u[2].atoms) {
                const TimeAtom H = a.time * b.time * d.time;
                om_min = std::min(om_min, H.omega);
                const double g = std::abs(a.gamma) + std::abs(b.gamma) + std::abs(d.gamma);
                R = std::max(R, g * K * K * K + std::abs(H.nu) + 7.0 * H.omega);
            }
    const double dxi = std::min(wmin / 5.0, om_min / (18.0 * K * K)) / res;
    const double dtau = om_min / 6.0 / res;
    std::array<std::vector<LatticeAtom>, 3> la;
    long m_out = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        long mx = 0;
        for (const auto& a : u[i].atoms) {
            la[i].push_back(lattice_atom(a, dxi));
            mx = std::max({mx, std::abs(la[i].back().m_lo), std::abs(la[i].back().m_hi)});
        }
        m_out += mx;
    }
    const std::size_t nx = static_cast<std::size_t>(2 * (m_out + 1));
    const long j_half = static_cast<long>(std::ceil(R / dtau)) + 1;
    const std::size_t nt = static_cast<std::size_t>(2 * j_half);
    if (3.0 * static_cast<double>(nx) * static_cast<double>(nt) > max_points)
        throw RangeError("trilinear region split: grid too large");
    std::array<std::vector<cplx>, 3> acc;
    for (auto& v : acc) v.assign(nx * nt, cplx{});
    const long x_half = static_cast<long>(nx / 2);
    const double pref = dxi * dxi / (2.0 * pi);

    for (const auto& a : la[0])
        for (const auto& b : la[1])
            for (const auto& d : la[2]) {
                const TimeAtom H = a.atom->time * b.atom->time * d.atom->time;
                const double cut = 1e-10 * a.peak * b.peak * d.peak;
                for (long m1 = a.m_lo; m1 <= a.m_hi; ++m1) {
                    const cplx p1 = a.phi[static_cast<std::size_t>(m1 - a.m_lo)];
                    const double x1 = static_cast<double>(m1) * dxi;
                    for (long m2 = b.m_lo; m2 <= b.m_hi; ++m2) {
                        const cplx p12 = p1 * b.phi[static_cast<std::size_t>(m2 - b.m_lo)];
                        if (std::abs(p12) * d.peak < cut) continue;
                        const double x2 = static_cast<double>(m2) * dxi;
                        const double th12 = a.atom->gamma * x1 * x1 * x1 + b.atom->gamma * x2 * x2 * x2;
                        for (long m3 = d.m_lo; m3 <= d.m_hi; ++m3) {
                            const cplx p123 = p12 * d.phi[static_cast<std::size_t>(m3 - d.m_lo)];
                            if (std::abs(p123) < cut) continue;
                            const double x3 = static_cast<double>(m3) * dxi;
                            const double xi = x1 + x2 + x3;
                            if (m1 + m2 + m3 == 0) continue;
                            const auto reg = static_cast<std::size_t>(classify_triple(x1, x2, x3));
                            cplx* row = acc[reg].data() + static_cast<std::size_t>(m1 + m2 + m3 + x_half) * nt;
                            add_gaussian(row, j_half, static_cast<long>(nt), dtau, H,
                                         th12 + d.atom->gamma * x3 * x3 * x3, pref * cplx{0.0, xi} * p123);
                        }
                    }
                }
            }
    std::vector<cplx> total(nx * nt);
    for (const auto& v : acc)
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i];
    RegionRatios out{};
    out.sample_id = id;
    out.lambda = lambda;
    out.region_a = xrsb_norm(to_field(acc[0], nx, nt, dxi, dtau), r, s, bp);
    out.region_b = xrsb_norm(to_field(acc[1], nx, nt, dxi, dtau), r, s, bp);
    out.region_c = xrsb_norm(to_field(acc[2], nx, nt, dxi, dtau), r, s, bp);
    out.total = xrsb_norm(to_field(total, nx, nt, dxi, dtau), r, s, bp);
    const Evaluation e = evaluate_kind(c, id, lambda, res);
    out.pseudo_spectral = e.lhs;
    out.rhs = e.rhs;
    return out;
}

}  // namespace mkdv
