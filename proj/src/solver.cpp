#include "mkdv/solver.hpp"

#include "mkdv/duhamel.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/multiplier.hpp"
#include "mkdv/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace mkdv {

namespace {

constexpr double alias_tolerance = 1e-6;

std::string str(const Rational& q)
{
    std::ostringstream os;
    os << q.numerator();
    if (q.denominator() != 1) os << '/' << q.denominator();
    return os.str();
}

SpectralField frequency_of(const SpectralField& u)
{
    return u.layout() == Layout1D::frequency ? u : to_frequency(u);
}

// 2/3 rule: keep |k| <= n/3 and drop the unpaired Nyquist mode.
bool kept(const Grid1D& g, std::size_t k)
{
    return std::abs(g.mode(k)) <= static_cast<double>(g.size() / 3);
}

void dealias(std::span<cplx> v, const Grid1D& g)
{
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!kept(g, k)) v[k] = 0.0;
}

// Largest coefficient in the outer fifth of the retained band (or beyond it)
// relative to the largest overall: a resolved field has decayed before the cut.
double alias_fraction(std::span<const cplx> v, const Grid1D& g)
{
    const double edge = 0.8 * static_cast<double>(g.size() / 3);
    double in = 0.0, out = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        double& slot = std::abs(g.mode(k)) <= edge ? in : out;
        slot = std::max(slot, std::abs(v[k]));
    }
    const double top = std::max(in, out);
    return top > 0.0 ? out / top : 0.0;
}

// i xi P[(u^3)^] for a dealiased row u^.
std::vector<cplx> nonlinear_term(std::span<const cplx> uhat, const Grid1D& g)
{
    std::vector<cplx> phys = centered_inverse(uhat, g.dx(), g.x(0));
    for (auto& z : phys) z = z * z * z;
    std::vector<cplx> out = centered_forward(phys, g.dx(), g.x(0));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = kept(g, k) ? cplx(0.0, g.xi(k)) * out[k] : 0.0;
    return out;
}

double max_abs_physical(std::span<const cplx> uhat, const Grid1D& g)
{
    double m = 0.0;
    for (const cplx& z : centered_inverse(uhat, g.dx(), g.x(0))) m = std::max(m, std::abs(z));
    return m;
}

std::vector<cplx> airy_factor(const Grid1D& g, double h)
{
    std::vector<cplx> e(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double xi = g.xi(k);
        e[k] = std::polar(1.0, h * xi * xi * xi);
    }
    return e;
}

}  // namespace

std::vector<std::string> violations(const PicardConfig& c)
{
    std::vector<std::string> v;
    if (!(c.delta > 0.0 && c.delta <= 1.0)) v.emplace_back("delta must lie in (0, 1]");
    const bool r_ok = c.r > Rational(4, 3) && c.r <= Rational(2);
    if (!r_ok) v.emplace_back("r must lie in (4/3, 2], got " + str(c.r));
    if (r_ok && c.s < scale_exponent(c.r))
        v.emplace_back("s must be >= s(r) = 1/2 - 1/(2r) = " + str(scale_exponent(c.r)) + ", got " + str(c.s));
    if (c.r.numerator() > 0 && c.b <= Rational(1) / c.r) v.emplace_back("b must exceed 1/r, got b = " + str(c.b));
    if (!(c.b_prime > c.b - 1 && c.b_prime.numerator() <= 0))
        v.emplace_back("b' must lie in (b - 1, 0], got b' = " + str(c.b_prime));
    if (c.max_iterations == 0) v.emplace_back("max_iterations must be positive");
    if (!(c.tolerance > 0.0)) v.emplace_back("tolerance must be positive");
    if (c.steps_per_delta < 4) v.emplace_back("steps_per_delta must be >= 4");
    if (!(c.constant > 0.0)) v.emplace_back("estimate constant must be positive");
    if (!(c.half_length > 0.0)) v.emplace_back("half_length must be positive");
    if (c.modes < 8 || c.modes % 2 != 0) v.emplace_back("modes must be even and >= 8");
    return v;
}

Smallness smallness(const SpectralField& u0, const PicardConfig& c)
{
    const double norm = fl_norm(frequency_of(u0), to_double(c.r), to_double(c.s));
    const double R = 2.0 * c.constant * norm;
    const double lhs = std::pow(c.delta, to_double(1 - c.b + c.b_prime));
    const double rhs = R > 0.0 ? 1.0 / (4.0 * c.constant * R * R) : infinity;
    return {R, lhs, rhs};
}

SpectralField SolveResult::at_delta() const { return time_slice(u, u.grid().n_times() - 1); }

SolveResult picard_solve(const SpectralField& u0_in, const PicardConfig& c)
{
    if (const auto v = violations(c); !v.empty()) {
        std::string msg = "invalid Picard configuration:";
        for (const auto& s : v) msg += "\n  - " + s;
        throw ParameterError(msg);
    }
    const SpectralField u0 = frequency_of(u0_in);
    const Grid1D& g = u0.grid();
    if (g.size() != c.modes || g.half_length() != c.half_length)
        throw ShapeError("initial datum grid does not match the configured periodic grid");
    if (!u0.real_flag()) throw RealityError("picard_solve needs real initial data");
    const double alias0 = alias_fraction(u0.coeffs(), g);
    if (alias0 > alias_tolerance)
        throw ResolutionError("initial datum has relative weight " + std::to_string(alias0) +
                              " at the edge of the dealiased band; refine the grid");

    const double r = to_double(c.r), s = to_double(c.s), b = to_double(c.b);
    const Smallness small = smallness(u0, c);
    std::vector<std::string> diag;
    if (c.nonlinear && !small.holds()) {
        std::ostringstream os;
        os << "smallness relation fails: delta^(1-b+b') = " << small.lhs << " > 1/(4cR^2) = " << small.rhs
           << " (c = " << c.constant << ", R = " << small.radius << "); choose a smaller delta";
        if (!c.allow_outside_smallness) throw ParameterError(os.str());
        diag.push_back("override: " + os.str());
    }

    const std::size_t m = c.steps_per_delta;
    const std::size_t nt = 4 * m;
    const std::size_t nx = g.size();
    const SpaceTimeGrid grid(g, nt, -2.0 * c.delta, 2.0 * c.delta);
    const Cutoff psi_d = c.psi.dilated(c.delta);

    std::vector<cplx> base(u0.coeffs().begin(), u0.coeffs().end());
    dealias(base, g);
    std::vector<cplx> lin(grid.points());
    std::vector<double> cut(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        const double t = grid.t(j);
        cut[j] = psi_d(t);
        const double w = c.psi(t);
        for (std::size_t k = 0; k < nx; ++k) {
            const double xi = g.xi(k);
            lin[j * nx + k] = w * std::polar(1.0, t * xi * xi * xi) * base[k];
        }
    }

    auto cutoff_times = [&](const SpaceTimeField& f) {
        std::vector<cplx> a(f.coeffs().begin(), f.coeffs().end());
        for (std::size_t j = 0; j < nt; ++j)
            for (std::size_t k = 0; k < nx; ++k) a[j * nx + k] *= cut[j];
        return a;
    };

    SpaceTimeField u(grid, lin, Layout2D::mixed);
    std::vector<cplx> duh_prev(grid.points(), 0.0);
    SolveResult res{u, {}, {}, 0.0, false, 0, 0.0, 0.0, 0.0, small, std::move(diag)};
    std::size_t rising = 0;
    for (std::size_t it = 0; it < c.max_iterations; ++it) {
        std::vector<cplx> nl(grid.points(), 0.0);
        if (c.nonlinear) {
            double alias = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                const auto row = u.row(j);
                alias = std::max(alias, alias_fraction(row, g));
                const auto f = nonlinear_term(row, g);
                std::copy(f.begin(), f.end(), nl.begin() + static_cast<long>(j * nx));
            }
            if (alias > alias_tolerance)
                throw ResolutionError("iterate reaches the edge of the dealiased band (relative weight " + std::to_string(alias) +
                                      "); refine the grid");
        }
        const DuhamelResult d =
            duhamel_integral(SpaceTimeField(grid, std::move(nl), Layout2D::mixed), 1e-8, DuhamelRule::cubic);
        res.duhamel_error = std::max(res.duhamel_error, d.error_estimate);
        std::vector<cplx> duh = cutoff_times(d.value);
        std::vector<cplx> diff(grid.points()), next(grid.points());
        for (std::size_t i = 0; i < grid.points(); ++i) {
            diff[i] = duh[i] - duh_prev[i];
            next[i] = lin[i] + duh[i];
        }
        const double dist = xrsb_norm_mixed(SpaceTimeField(grid, std::move(diff), Layout2D::mixed), r, s, b, 2);
        if (!std::isfinite(dist)) throw DivergenceError("Picard iterate is not finite; choose a smaller delta");
        if (!res.distances.empty()) {
            const double prev = res.distances.back();
            const double q = prev > 0.0 ? dist / prev : 0.0;
            res.contraction.push_back(q);
            rising = q >= 1.0 ? rising + 1 : 0;
        }
        res.distances.push_back(dist);
        u = SpaceTimeField(grid, std::move(next), Layout2D::mixed);
        duh_prev = std::move(duh);
        res.iterations = it + 1;
        if (rising >= 3)
            throw DivergenceError("Picard iteration does not contract (3 consecutive ratios >= 1); choose a smaller delta");
        if (dist < c.tolerance) {
            res.converged = true;
            break;
        }
    }
    if (res.duhamel_error > 1e-8)
        res.diagnostics.push_back("Duhamel quadrature error estimate " + std::to_string(res.duhamel_error) +
                                  " exceeds 1e-8; raise steps_per_delta");
    res.residual = res.distances.back();
    if (!res.converged)
        res.diagnostics.push_back("no convergence after " + std::to_string(res.iterations) + " iterations");

    res.extension_norm = xrsb_norm_mixed(SpaceTimeField(grid, cutoff_times(u), Layout2D::mixed), r, s, b, 2);

    // restrict to [0, delta]
    const std::size_t j0 = 2 * m;
    std::vector<cplx> win((m + 1) * nx);
    std::copy(u.coeffs().begin() + static_cast<long>(j0 * nx),
              u.coeffs().begin() + static_cast<long>((j0 + m + 1) * nx), win.begin());
    res.u = SpaceTimeField(SpaceTimeGrid(g, m + 1, 0.0, c.delta + grid.dt()), std::move(win), Layout2D::mixed);
    for (std::size_t j = 0; j <= m; ++j) res.sup_norm = std::max(res.sup_norm, fl_norm(time_slice(res.u, j), r, s));
    return res;
}

Trajectory reference_integrate(const SpectralField& u0_in, double t_end, double dt,
                               std::vector<double> sample_times, bool nonlinear)
{
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be finite and >= 0");
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    const SpectralField u0 = frequency_of(u0_in);
    const Grid1D& g = u0.grid();
    if (!u0.real_flag()) throw RealityError("reference_integrate needs real initial data");
    for (double t : sample_times)
        if (!(t >= 0.0 && t <= t_end)) throw ParameterError("sample times must lie in [0, t_end]");
    sample_times.push_back(t_end);
    std::sort(sample_times.begin(), sample_times.end());
    sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());

    std::vector<cplx> u(u0.coeffs().begin(), u0.coeffs().end());
    dealias(u, g);
    const double amp0 = max_abs_physical(u, g);
    // the integrating factor removes the xi^3 stiffness; what remains is the
    // linearized cubic term, of size 3 xi_max |u|^2 (RK4 is stable up to ~2.78)
    const double xi_cut = static_cast<double>(g.size() / 3) * g.dxi();
    if (nonlinear && dt * 3.0 * xi_cut * amp0 * amp0 > 2.5)
        throw InstabilityError("dt too large for the cubic term: dt * 3 xi_max |u|^2 = " +
                               std::to_string(dt * 3.0 * xi_cut * amp0 * amp0) + " > 2.5");

    const std::size_t n = u.size();
    auto N = [&](const std::vector<cplx>& v) {
        return nonlinear ? nonlinear_term(v, g) : std::vector<cplx>(n, 0.0);
    };
    auto step = [&](double h) {
        const auto E = airy_factor(g, h), Eh = airy_factor(g, 0.5 * h);
        const auto k1 = N(u);
        std::vector<cplx> a(n);
        for (std::size_t k = 0; k < n; ++k) a[k] = Eh[k] * (u[k] + 0.5 * h * k1[k]);
        const auto k2 = N(a);
        for (std::size_t k = 0; k < n; ++k) a[k] = Eh[k] * u[k] + 0.5 * h * k2[k];
        const auto k3 = N(a);
        for (std::size_t k = 0; k < n; ++k) a[k] = E[k] * u[k] + h * Eh[k] * k3[k];
        const auto k4 = N(a);
        for (std::size_t k = 0; k < n; ++k)
            u[k] = E[k] * u[k] + h / 6.0 * (E[k] * k1[k] + 2.0 * Eh[k] * (k2[k] + k3[k]) + k4[k]);
    };

    Trajectory tr;
    double t = 0.0;
    for (double target : sample_times) {
        while (target - t > 1e-12 * std::max(1.0, target)) {
            const double h = std::min(dt, target - t);
            step(h);
            t = (target - t - h <= 1e-12 * std::max(1.0, target)) ? target : t + h;
            const double amp = max_abs_physical(u, g);
            if (!std::isfinite(amp) || amp > 1e3 * std::max(amp0, 1e-300))
                throw InstabilityError("blow-up detected at t = " + std::to_string(t) +
                                       ": sup |u| grew beyond 1e3 times its initial value");
        }
        tr.times.push_back(target);
        tr.states.emplace_back(g, u, Layout1D::frequency);
    }
    return tr;
}

Conserved conserved_quantities(const SpectralField& u_in)
{
    const SpectralField f = frequency_of(u_in);
    const Grid1D& g = f.grid();
    const auto phys = centered_inverse(f.coeffs(), g.dx(), g.x(0));
    std::vector<cplx> dh(f.coeffs().begin(), f.coeffs().end());
    for (std::size_t k = 0; k < dh.size(); ++k) dh[k] *= cplx(0.0, g.xi(k));
    const auto ux = centered_inverse(dh, g.dx(), g.x(0));
    double scale = 1.0, imag = 0.0;
    for (const cplx& z : phys) {
        scale = std::max(scale, std::abs(z.real()));
        imag = std::max(imag, std::abs(z.imag()));
    }
    if (imag > 1e-10 * scale)
        throw RealityError("conserved_quantities needs a real field (imaginary residue " + std::to_string(imag) + ")");
    Conserved q{0.0, 0.0, 0.0};
    const double dx = g.dx();
    for (std::size_t j = 0; j < phys.size(); ++j) {
        const double v = phys[j].real(), vx = ux[j].real();
        q.mass += v * dx;
        q.l2 += v * v * dx;
        q.hamiltonian += (0.5 * vx * vx + 0.25 * v * v * v * v) * dx;
    }
    return q;
}

KinkResidual kink_residual(double k, double half_length, std::size_t n, double t)
{
    if (!(k > 0.0) || !(half_length > 0.0) || n < 2) throw ParameterError("kink_residual: bad arguments");
    const double A = std::sqrt(2.0) * k;
    const double speed = -2.0 * k * k;  // u = A tanh(k (x - speed t))
    KinkResidual out{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -half_length + 2.0 * half_length * static_cast<double>(j) / static_cast<double>(n - 1);
        const double T = std::tanh(k * (x - speed * t));
        const double ch = std::cosh(k * (x - speed * t));
        const double S = 1.0 / (ch * ch);
        const double ux = A * k * S;
        const double ut = -speed * ux;
        const double uxxx = A * k * k * k * (4.0 * T * T * S - 2.0 * S * S);
        const double cube_x = 3.0 * (A * T) * (A * T) * ux;
        out.max_residual = std::max(out.max_residual, std::abs(ut + uxxx - cube_x));
        out.scale = std::max({out.scale, std::abs(ut), std::abs(uxxx), std::abs(cube_x)});
    }
    return out;
}

SpectralField random_direction(const Grid1D& g, double r, double s, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::array<double, 4> a{}, c{};
    for (std::size_t j = 0; j < 4; ++j) {
        a[j] = nd(rng);
        c[j] = nd(rng);
    }
    std::vector<cplx> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        double p = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double jx = static_cast<double>(j) * x;
            p += a[j] * std::cos(jx) + c[j] * std::sin(jx);
        }
        v[i] = std::exp(-0.5 * x * x) * p;
    }
    SpectralField f = to_frequency(SpectralField(g, std::move(v), Layout1D::physical));
    std::vector<cplx> h(f.coeffs().begin(), f.coeffs().end());
    dealias(h, g);
    f = SpectralField(g, std::move(h), Layout1D::frequency);
    return f.scaled(1.0 / fl_norm(f, r, s));
}

LipschitzTable lipschitz_probe(const SpectralField& u0_in, const std::vector<double>& epsilons,
                               const PicardConfig& c, double delta0, std::uint64_t seed)
{
    if (epsilons.empty()) throw ParameterError("lipschitz_probe needs at least one epsilon");
    for (double e : epsilons)
        if (!(e != 0.0) || !std::isfinite(e)) throw ParameterError("epsilon = 0 gives an undefined quotient");
    if (!(delta0 > 0.0 && delta0 <= c.delta)) throw ParameterError("delta0 must lie in (0, delta]");
    const SpectralField u0 = frequency_of(u0_in);
    const double r = to_double(c.r), s = to_double(c.s);
    const SpectralField w = random_direction(u0.grid(), r, s, seed);

    const SolveResult base = picard_solve(u0, c);
    const std::size_t last = static_cast<std::size_t>(std::floor(delta0 / base.u.grid().dt() + 1e-9));

    auto one = [&](double eps) -> LipschitzRow {
        LipschitzRow row{eps, std::nullopt, 0.0, 0.0, {}};
        try {
            const SolveResult other = picard_solve(u0.plus(w.scaled(eps)), c);
            const double denom = fl_norm(time_slice(base.u, 0).minus(time_slice(other.u, 0)), r, s);
            double sup = 0.0;
            for (std::size_t j = 0; j <= last; ++j)
                sup = std::max(sup, fl_norm(time_slice(base.u, j).minus(time_slice(other.u, j)), r, s));
            row.numerator = sup;
            row.denominator = denom;
            row.quotient = sup / denom;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };
    std::vector<std::future<LipschitzRow>> jobs;
    for (double e : epsilons) jobs.push_back(std::async(std::launch::async, one, e));
    LipschitzTable tab{{}, delta0, 0.0};
    double lo = infinity, hi = 0.0;
    for (auto& j : jobs) {
        tab.rows.push_back(j.get());
        if (tab.rows.back().quotient) {
            lo = std::min(lo, *tab.rows.back().quotient);
            hi = std::max(hi, *tab.rows.back().quotient);
        }
    }
    tab.variation = hi > 0.0 ? hi / lo : 0.0;
    return tab;
}

SpectralField periodic_gaussian(const Grid1D& g, double amplitude, double width, double centre)
{
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double z = (g.x(j) - centre) / width;
        v[j] = amplitude * std::exp(-z * z);
    }
    return to_frequency(SpectralField(g, std::move(v), Layout1D::physical));
}

}  // namespace mkdv
