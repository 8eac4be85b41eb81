// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.

#include "oracles.hpp"

#include "mkdv/bilinear.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/experiment.hpp"
#include "mkdv/probe.hpp"
#include "mkdv/solver.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace mkdv;

namespace {

constexpr std::size_t resonance_trials = 10000;
constexpr double resonance_seconds = 5.0;
constexpr std::size_t bilinear_pairs = 10;
constexpr std::size_t bilinear_modes = 128;
constexpr double bilinear_rel_tol = 0.02;
constexpr double bilinear_seconds = 120.0;
constexpr std::size_t homog_combos = 20;
constexpr double homog_tol = 1e-6;
constexpr double slope_slack = 0.1;
constexpr double spread_limit = 10.0;
constexpr double picard_l2_tol = 1e-6;
constexpr double contraction_limit = 0.5;
constexpr double picard_seconds = 60.0;
constexpr double order_lo = 10.0, order_hi = 22.0;
constexpr double order_dt = 0.02;
constexpr double drift_mass = 1e-10, drift_l2 = 1e-8, drift_h = 1e-6;
constexpr double kink_tol = 1e-10;
constexpr double lipschitz_variation = 2.0;
constexpr double linear_quotient_tol = 1e-10;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome resonance_identity()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long long> num(-60, 60), den(1, 24);
    auto draw = [&] { return Rational(num(rng), den(rng)); };
    std::size_t mismatches = 0, checked = 0, degenerate = 0;
    for (std::size_t i = 0; i < resonance_trials; ++i) {
        const Rational xi = draw(), xi1 = draw(), eta1 = draw();
        const Rational xi2 = xi - xi1, eta2 = xi - eta1;
        const Rational direct = xi1 * xi1 * xi1 + xi2 * xi2 * xi2 - eta1 * eta1 * eta1 - eta2 * eta2 * eta2;
        if (resonance_factored(xi, xi1, eta1) != direct || resonance_cubic(xi, xi1, eta1) != direct) ++mismatches;
        const auto c = resonance_polynomial(xi, xi1);
        // g(eta1) is minus the resonance function
        if (c[0] + c[1] * eta1 + c[2] * eta1 * eta1 != -direct) ++mismatches;
        if (xi.numerator() == 0 || 2 * xi1 == xi) {
            ++degenerate;
            try {
                (void)resonance_data(xi, xi1);
                ++mismatches;
            } catch (const DegenerateResonanceError&) {
            }
            continue;
        }
        const ResonanceData<Rational> d = resonance_data(xi, xi1);
        for (std::size_t j = 0; j < 2; ++j) {
            const Rational z = d.zeros[j];
            const Rational g = c[0] + c[1] * z + c[2] * z * z;
            const Rational dg = c[1] + 2 * c[2] * z;  // symbolic derivative
            const Rational w = 3 * abs(xi) * abs(2 * xi1 - xi);
            if (g.numerator() != 0 || abs(dg) != d.weights[j] || d.weights[j] != w) ++mismatches;
        }
        ++checked;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < resonance_seconds,
            fmt("%zu triples (%zu weight checks, %zu degenerate rejected), %zu mismatches, %.2f s (limit %.0f s)",
                resonance_trials, checked, degenerate, mismatches, secs, resonance_seconds)};
}

Outcome bilinear_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> c1(0.3, 0.6), c2(1.8, 2.2), w(0.1, 0.2), ph(0.0, 2.0 * oracle::pi);
    double worst = 0.0, horizon = 0.0;
    for (std::size_t i = 0; i < bilinear_pairs; ++i) {
        const FrequencyAtom a1{c1(rng), w(rng), std::polar(1.0, ph(rng))};
        const FrequencyAtom a2{c2(rng), w(rng), std::polar(1.0, ph(rng))};
        const double reach = std::max(a1.centre + 7.0 * a1.width, a2.centre + 7.0 * a2.width);
        const double dxi = reach / static_cast<double>(bilinear_modes / 2);
        const Grid1D g(oracle::pi / dxi, bilinear_modes);
        const Lemma3Value closed = lemma3_closed_form(Profile1D{{a1}}.sample(g), Profile1D{{a2}}.sample(g));
        const oracle::BruteForce bf = oracle::bilinear_brute_force(a1, a2);
        worst = std::max(worst, std::abs(closed.value - bf.value) / bf.value);
        horizon = std::max(horizon, bf.horizon);
    }
    const double secs = seconds_since(t0);
    return {worst < bilinear_rel_tol && secs < bilinear_seconds,
            fmt("%zu Gaussian pairs on %zu modes, worst relative gap %.3e (limit %.0e), T up to %g, %.1f s (limit %.0f s)",
                bilinear_pairs, bilinear_modes, worst, bilinear_rel_tol, horizon, secs, bilinear_seconds)};
}

Outcome homogeneous_identity()
{
    std::mt19937_64 rng(5);
    const Rational rs[] = {Rational(2), Rational(9, 5), Rational(7, 4), Rational(5, 3), Rational(8, 5),
                           Rational(3, 2), Rational(7, 5)};
    std::uniform_int_distribution<int> ri(0, 6), si(-4, 8), bi(6, 18), li(-2, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < homog_combos; ++i) {
        ProbeConfig c = default_probe(EstimateKind::HOMOG_5);
        c.params.r = rs[ri(rng)];
        c.params.s = Rational(si(rng), 8);
        c.params.b = Rational(bi(rng), 20);
        c.samples = 1;
        c.seed = 100 + i;
        c.dilations = {std::ldexp(1.0, li(rng))};
        const EstimateReport rep = run_probe(c);
        worst = std::max(worst, std::abs(rep.samples.front().ratio - 1.0));
    }
    return {worst <= homog_tol,
            fmt("%zu random (u0, psi, r, s, b, lambda), largest |ratio - 1| = %.3e (limit %.0e)", homog_combos, worst,
                homog_tol)};
}

Outcome delta_power()
{
    const std::pair<Rational, Rational> pairs[] = {
        {Rational(3, 5), Rational(-1, 5)}, {Rational(1, 2), Rational(-1, 4)}, {Rational(7, 10), Rational(-3, 10)}};
    bool ok = true;
    std::string detail;
    for (const Rational r : {Rational(2), Rational(3, 2)}) {
        for (const auto& [b, bp] : pairs) {
            ProbeConfig c = default_probe(EstimateKind::LEMMA2_DELTA);
            c.params.r = r;
            c.params.b = b;
            c.params.b_prime = bp;
            validate(c.kind, c.params);
            const EstimateReport rep = run_probe(c);
            const double need = *rep.predicted_slope - slope_slack;
            ok = ok && rep.slope->slope >= need;
            detail += fmt("%s(r=%s b=%s b'=%s: %.3f >= %.3f)", detail.empty() ? "" : " ", format_rational(r).c_str(),
                          format_rational(b).c_str(), format_rational(bp).c_str(), rep.slope->slope, need);
        }
    }
    return {ok, "fitted slopes over delta = 2^0..2^-6: " + detail};
}

Outcome uniform_constants()
{
    std::vector<ProbeConfig> runs;
    for (EstimateKind k : all_kinds())
        if (k != EstimateKind::TRILINEAR_T2) runs.push_back(default_probe(k));
    for (const auto& [r, s] : {std::pair{Rational(2), Rational(1, 4)}, std::pair{Rational(3, 2), Rational(1, 6)}}) {
        ProbeConfig c = default_probe(EstimateKind::TRILINEAR_T2);
        c.params.r = r;
        c.params.s = s;
        c.params.b = 1 / r + Rational(1, 20);
        c.params.b_prime = 1 / (2 * r) - Rational(5, 8) - Rational(1, 20);
        runs.push_back(c);
    }
    bool ok = true;
    std::string breaches, worst_ok;
    double worst = 0.0;
    for (const ProbeConfig& c : runs) {
        validate(c.kind, c.params);
        const EstimateReport rep = run_probe(c);
        const bool flag_consistent = rep.flagged == (rep.spread >= spread_limit);
        const std::string name = std::string(kind_name(c.kind)) + "(r=" + format_rational(c.params.r) + ")";
        if (rep.spread >= spread_limit || !flag_consistent) {
            ok = false;
            breaches += fmt(" %s spread %.3g%s", name.c_str(), rep.spread, rep.flagged ? " FLAGGED" : " NOT FLAGGED");
        } else if (rep.spread > worst) {
            worst = rep.spread;
            worst_ok = name;
        }
    }
    return {ok, fmt("%zu probes x 100 samples x 7 dilations; largest passing spread %.3g (%s); breaches:%s",
                    runs.size(), worst, worst_ok.c_str(), breaches.empty() ? " none" : breaches.c_str())};
}

Outcome solver_cross_check()
{
    const auto t0 = std::chrono::steady_clock::now();
    SolveSpec spec;  // u0 = 0.1 e^{-x^2}, N = 256, L = 20, delta = 1/2
    PicardConfig& pc = spec.picard;
    pc.constant = measured_constant(pc.r, pc.s, pc.b, pc.b_prime, 1);
    const SpectralField u0 = initial_datum(spec);
    const SolveResult res = picard_solve(u0, pc);
    const Trajectory ref = reference_integrate(u0, pc.delta, 1.25e-3);
    const double diff = fl_norm(ref.states.back().minus(res.at_delta()), 2.0, 0.0);
    double contraction = 0.0;
    for (double q : res.contraction) contraction = std::max(contraction, q);
    const double secs = seconds_since(t0);
    return {res.converged && res.small.holds() && diff < picard_l2_tol && contraction <= contraction_limit &&
                secs < picard_seconds,
            fmt("L2 gap at t = delta %.3e (limit %.0e), contraction %.3e (limit %.1f), smallness %.3g <= %.3g with "
                "measured c = %.4g, %zu iterations, %.1f s (limit %.0f s)",
                diff, picard_l2_tol, contraction, contraction_limit, res.small.lhs, res.small.rhs, pc.constant,
                res.iterations, secs, picard_seconds)};
}

Outcome reference_integrator()
{
    const Grid1D g(20.0, 256, Representation::periodic_fft);
    const SpectralField u0 = periodic_gaussian(g, 0.5);
    const SpectralField exact = reference_integrate(u0, 1.0, order_dt / 8).states.back();
    const double e1 = fl_norm(reference_integrate(u0, 1.0, order_dt).states.back().minus(exact), 2.0, 0.0);
    const double e2 = fl_norm(reference_integrate(u0, 1.0, order_dt / 2).states.back().minus(exact), 2.0, 0.0);
    const double factor = e1 / e2;
    std::vector<double> ts;
    for (int i = 1; i <= 10; ++i) ts.push_back(0.1 * i);
    const Trajectory tr = reference_integrate(u0, 1.0, 0.005, ts);
    const Conserved q0 = conserved_quantities(u0);
    double dm = 0, dl = 0, dh = 0;
    for (const auto& s : tr.states) {
        const Conserved q = conserved_quantities(s);
        dm = std::max(dm, std::abs(q.mass - q0.mass) / std::abs(q0.mass));
        dl = std::max(dl, std::abs(q.l2 - q0.l2) / q0.l2);
        dh = std::max(dh, std::abs(q.hamiltonian - q0.hamiltonian) / q0.hamiltonian);
    }
    return {factor >= order_lo && factor <= order_hi && dm < drift_mass && dl < drift_l2 && dh < drift_h,
            fmt("error reduction %.2f for dt %.3g -> %.3g (range [%.0f, %.0f]); drift over [0, 1]: mass %.2e, L2 %.2e, "
                "H %.2e (limits %.0e / %.0e / %.0e)",
                factor, order_dt, order_dt / 2, order_lo, order_hi, dm, dl, dh, drift_mass, drift_l2, drift_h)};
}

Outcome kink()
{
    double worst = 0.0;
    for (double k : {0.25, 0.5, 1.0, 2.0})
        for (double t : {0.0, 0.3, 1.0}) worst = std::max(worst, kink_residual(k, 20.0, 4001, t).max_residual);
    return {worst < kink_tol, fmt("largest analytic residual %.3e (limit %.0e) over k in {1/4, 1/2, 1, 2}", worst,
                                  kink_tol)};
}

Outcome lipschitz()
{
    SolveSpec spec;
    const SpectralField u0 = initial_datum(spec);
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const LipschitzTable tab = lipschitz_probe(u0, eps, spec.picard, 0.5);
    bool solved = tab.rows.size() == eps.size();
    for (const auto& r : tab.rows) solved = solved && r.quotient.has_value();
    PicardConfig lin = spec.picard;
    lin.nonlinear = false;
    const LipschitzTable lt = lipschitz_probe(u0, eps, lin, 0.5);
    double lin_dev = 0.0;
    for (const auto& r : lt.rows) lin_dev = std::max(lin_dev, r.quotient ? std::abs(*r.quotient - 1.0) : 1.0);
    std::string q;
    for (const auto& r : tab.rows) q += fmt(" %.6f", r.quotient.value_or(-1.0));
    return {solved && tab.variation < lipschitz_variation && lin_dev <= linear_quotient_tol,
            fmt("quotients%s, variation %.6f (limit x%.0f); linear |q - 1| = %.2e (limit %.0e)", q.c_str(),
                tab.variation, lipschitz_variation, lin_dev, linear_quotient_tol)};
}

Outcome embeddings()
{
    bool ok = true;
    std::string detail;
    for (EstimateKind k : {EstimateKind::EMBED_4, EstimateKind::EMBED_52}) {
        const ProbeConfig c = default_probe(k);
        const Rational r = k == EstimateKind::EMBED_4 ? c.params.r1 : c.params.r;
        const Rational b = k == EstimateKind::EMBED_4 ? c.params.b1 : c.params.b;
        ok = ok && b == 1 / r + Rational(1, 20);
        const EstimateReport rep = run_probe(c);
        ok = ok && rep.cap && rep.max_ratio <= *rep.cap;
        detail += fmt("%s%s max ratio %.4g vs cap %.4g (%zu fields)", detail.empty() ? "" : "; ",
                      std::string(kind_name(k)).c_str(), rep.max_ratio, rep.cap.value_or(0.0), rep.samples.size());
    }
    return {ok, detail};
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"resonance identity and weights", resonance_identity},
        {"bilinear closed form vs brute-force quadrature", bilinear_oracle},
        {"homogeneous identity", homogeneous_identity},
        {"delta power of the cut-off Duhamel bound", delta_power},
        {"uniform constants (max / median < 10)", uniform_constants},
        {"Picard vs integrating-factor reference", solver_cross_check},
        {"reference integrator order and conservation", reference_integrator},
        {"kink substitution residual", kink},
        {"Lipschitz quotients", lipschitz},
        {"embedding caps", embeddings},
    };
    int failed = 0, i = 0;
    for (const auto& [name, run] : criteria) {
        ++i;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("ERROR ") + e.what()};
        }
        failed += !o.pass;
        std::printf("C%-2d %s  %s: %s [%.1f s]\n", i, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("acceptance: %d of %d criteria pass\n", i - failed, i);
    return failed;
}
