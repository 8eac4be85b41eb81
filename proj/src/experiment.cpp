#include "mkdv/experiment.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mkdv {

namespace {

double median_of(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void summarize_rows(RunRecord& rec)
{
    std::vector<double> v;
    for (const auto& r : rec.rows) v.push_back(r.ratio);
    if (v.empty()) return;
    rec.summary.max_ratio = *std::max_element(v.begin(), v.end());
    rec.summary.median_ratio = median_of(v);
    rec.summary.spread = rec.summary.median_ratio > 0.0 ? rec.summary.max_ratio / rec.summary.median_ratio : 0.0;
}

RunRecord run_probe_experiment(const ExperimentConfig& c, RunRecord rec)
{
    const ProbeConfig& pc = c.probe;
    rec.kind = std::string(kind_name(pc.kind));
    const ProbeParams& p = pc.params;
    auto sink = [&](const ProbeSample& s) {
        rec.append({rec.kind, p.r, p.s, p.b, p.b_prime, s.lambda, s.sample_id, s.lhs, s.scale * s.rhs, s.ratio});
    };
    try {
        const EstimateReport rep =
            c.kind == ExperimentKind::sweep ? scaling_sweep(pc, pc.dilations, sink) : run_probe(pc, sink);
        rec.summary = {rep.max_ratio, rep.median_ratio, rep.spread, rep.flagged, std::nullopt, rep.predicted_slope,
                       rep.cap};
        if (rep.slope) rec.summary.slope = rep.slope->slope;
        if (rep.min_sample_slope)
            rec.notes.push_back("smallest per-sample slope " + std::to_string(*rep.min_sample_slope));
        if (rep.flagged)
            rec.notes.push_back("max / median = " + std::to_string(rep.spread) +
                                " breaches the uniform-constant proxy (limit 10)");
        for (const auto& l : rep.per_lambda) {
            std::ostringstream os;
            os << "lambda " << l.lambda << ": max " << l.max_ratio << ", median " << l.median_ratio << ", min "
               << l.min_ratio;
            rec.notes.push_back(os.str());
        }
        if (c.kind == ExperimentKind::sweep)
            rec.notes.push_back("spread of per-dilation maxima " + std::to_string(rep.lambda_spread));
        for (const auto& reg : rep.regions) {
            std::ostringstream os;
            os << "sample " << reg.sample_id << " regions A/B/C: " << reg.region_a / reg.rhs << " / "
               << reg.region_b / reg.rhs << " / " << reg.region_c / reg.rhs << " (total " << reg.total / reg.rhs
               << ", pseudo-spectral " << reg.pseudo_spectral / reg.rhs << ")";
            rec.notes.push_back(os.str());
        }
        for (const auto& d : rep.diagnostics) rec.notes.push_back(d);
        // the rest of the resolution ladder: how far the largest ratio moves
        for (std::size_t i = 1; i < c.resolutions.size(); ++i) {
            ProbeConfig finer = pc;
            finer.resolution = c.resolutions[i];
            const EstimateReport f = run_probe(finer);
            std::ostringstream os;
            os << "resolution " << c.resolutions[i] << ": max ratio " << f.max_ratio << " (relative change "
               << std::abs(f.max_ratio - rep.max_ratio) / rep.max_ratio << ")";
            rec.notes.push_back(os.str());
        }
    } catch (const NumericalError& e) {
        rec.partial = true;
        rec.failure = e.what();
        rec.failure_code = 2;
        summarize_rows(rec);
    }
    return rec;
}

RunRecord run_solve_experiment(const ExperimentConfig& c, RunRecord rec)
{
    rec.kind = "PICARD";
    PicardConfig pc = c.solve.picard;
    if (c.solve.measure_constant) {
        pc.constant = measured_constant(pc.r, pc.s, pc.b, pc.b_prime, c.seed);
        pc.constant_source = "2 x largest TRILINEAR_T2 ratio over 20 samples";
    }
    rec.notes.push_back("estimate constant c = " + std::to_string(pc.constant) + " (" + pc.constant_source + ")");
    const SpectralField u0 = initial_datum(c.solve);
    try {
        const SolveResult res = picard_solve(u0, pc);
        const double ext = res.extension_norm > 0.0 ? res.extension_norm : 1.0;
        for (std::size_t n = 0; n < res.distances.size(); ++n)
            rec.append({rec.kind, pc.r, pc.s, pc.b, pc.b_prime, pc.delta, n, res.distances[n], ext,
                        res.distances[n] / ext});
        summarize_rows(rec);
        std::ostringstream os;
        os << "iterations " << res.iterations << (res.converged ? " (converged)" : " (not converged)")
           << ", residual " << res.residual << ", extension norm " << res.extension_norm;
        rec.notes.push_back(os.str());
        if (!res.contraction.empty())
            rec.notes.push_back("largest contraction factor " +
                                std::to_string(*std::max_element(res.contraction.begin(), res.contraction.end())));
        rec.notes.push_back("smallness: delta^(1-b+b') = " + std::to_string(res.small.lhs) + " vs 1/(4cR^2) = " +
                            std::to_string(res.small.rhs));
        rec.notes.push_back("persistence: sup_t ||u(t)|| / extension norm = " +
                            std::to_string(res.sup_norm / ext));
        for (const auto& d : res.diagnostics) rec.notes.push_back(d);
        const std::size_t m = res.u.grid().n_times() - 1;
        for (std::size_t j : {std::size_t{0}, m / 2, m})
            rec.snapshots.push_back({res.u.grid().t(j), time_slice(res.u, j)});
        if (c.solve.reference_dt > 0.0) {
            const Trajectory tr = reference_integrate(u0, pc.delta, c.solve.reference_dt, {}, pc.nonlinear);
            const double diff = fl_norm(tr.states.back().minus(res.at_delta()), 2.0, 0.0);
            rec.notes.push_back("L2 distance to the integrating-factor reference at t = delta: " +
                                std::to_string(diff));
            const Conserved a = conserved_quantities(u0), b = conserved_quantities(res.at_delta());
            std::ostringstream cs;
            cs << "conserved at t = delta (relative change): mass " << std::abs(b.mass - a.mass) / std::abs(a.mass)
               << ", L2 " << std::abs(b.l2 - a.l2) / a.l2 << ", H " << std::abs(b.hamiltonian - a.hamiltonian) / a.hamiltonian;
            rec.notes.push_back(cs.str());
        }
    } catch (const NumericalError& e) {
        rec.partial = true;
        rec.failure = e.what();
        rec.failure_code = 2;
    }
    return rec;
}

RunRecord run_lipschitz_experiment(const ExperimentConfig& c, RunRecord rec)
{
    rec.kind = "LIPSCHITZ";
    PicardConfig pc = c.solve.picard;
    if (c.solve.measure_constant) {
        pc.constant = measured_constant(pc.r, pc.s, pc.b, pc.b_prime, c.seed);
        pc.constant_source = "2 x largest TRILINEAR_T2 ratio over 20 samples";
    }
    try {
        const LipschitzTable tab = lipschitz_probe(initial_datum(c.solve), c.lipschitz.epsilons, pc,
                                                   c.lipschitz.delta0, c.seed);
        for (std::size_t i = 0; i < tab.rows.size(); ++i) {
            const LipschitzRow& row = tab.rows[i];
            if (row.quotient)
                rec.append({rec.kind, pc.r, pc.s, pc.b, pc.b_prime, row.epsilon, i, row.numerator, row.denominator,
                            *row.quotient});
            else
                rec.notes.push_back("epsilon " + std::to_string(row.epsilon) + " failed: " + row.error);
        }
        summarize_rows(rec);
        rec.notes.push_back("quotient variation max/min = " + std::to_string(tab.variation) + " over delta0 = " +
                            std::to_string(tab.delta0));
    } catch (const NumericalError& e) {
        rec.partial = true;
        rec.failure = e.what();
        rec.failure_code = 2;
    }
    return rec;
}

}  // namespace

SpectralField initial_datum(const SolveSpec& spec)
{
    const Grid1D g(spec.picard.half_length, spec.picard.modes, Representation::periodic_fft);
    return periodic_gaussian(g, spec.amplitude, spec.width, spec.centre);
}

double measured_constant(const Rational& r, const Rational& s, const Rational& b, const Rational& b_prime,
                         std::uint64_t seed, std::size_t samples)
{
    ProbeConfig pc = default_probe(EstimateKind::TRILINEAR_T2);
    pc.params.r = r;
    pc.params.s = s;
    pc.params.b = b;
    pc.params.b_prime = b_prime;
    pc.samples = samples;
    pc.dilations = {1.0};
    pc.seed = seed;
    return 2.0 * run_probe(pc).max_ratio;
}

RunRecord run_experiment(const ExperimentConfig& c)
{
    RunRecord rec;
    rec.config_hash = config_hash(c);
    rec.timestamp = utc_timestamp();
    rec.experiment = std::string(experiment_name(c.kind));
    switch (c.kind) {
    case ExperimentKind::probe:
    case ExperimentKind::sweep: return run_probe_experiment(c, std::move(rec));
    case ExperimentKind::solve: return run_solve_experiment(c, std::move(rec));
    case ExperimentKind::lipschitz: return run_lipschitz_experiment(c, std::move(rec));
    }
    return rec;
}

}  // namespace mkdv
