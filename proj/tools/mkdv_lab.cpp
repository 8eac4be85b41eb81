#include "mkdv/errors.hpp"
#include "mkdv/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mkdv;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> resolution;
    std::string format = "table";
    std::string kind;
    std::optional<std::size_t> samples;
    std::string input;
};

void apply_overrides(ExperimentConfig& c, const Options& o)
{
    if (o.seed) c.seed = c.probe.seed = *o.seed;
    if (o.resolution) {
        if (!(*o.resolution > 0.0)) throw ParameterError("--resolution must be positive");
        c.resolutions = {*o.resolution};
        c.probe.resolution = *o.resolution;
    }
    if (!o.out.empty()) c.out_dir = o.out;
    if (o.samples) c.probe.samples = *o.samples;
}

ExperimentConfig base_config(const Options& o, ExperimentKind kind)
{
    ExperimentConfig c;
    if (!o.config.empty()) {
        c = load_config(o.config);
        if (c.kind != kind)
            throw ConfigError("config describes a " + std::string(experiment_name(c.kind)) + " experiment, not " +
                              std::string(experiment_name(kind)));
    } else {
        c.kind = kind;
    }
    apply_overrides(c, o);
    return c;
}

int finish(const RunRecord& rec, const ExperimentConfig& c, const Options& o)
{
    if (rec.partial && rec.rows.empty()) {
        std::cerr << "numerical failure before any row was recorded: " << rec.failure << "\n";
        return rec.failure_code ? rec.failure_code : 2;
    }
    emit_report(rec, ReportFormat::jsonl, c.out_dir);
    const std::string path = emit_report(rec, parse_format(o.format), c.out_dir);
    std::cout << render(rec, ReportFormat::table) << "report written to " << path << "\n";
    if (rec.partial) {
        std::cerr << "run stopped early: " << rec.failure << "\n";
        return rec.failure_code ? rec.failure_code : 2;
    }
    return 0;
}

int run(const Options& o, const std::string& verb)
{
    if (verb == "verify") {
        const auto kind = parse_kind(o.kind);
        if (!kind) throw ParameterError("unknown estimate kind '" + o.kind + "'");
        ExperimentConfig c;
        if (!o.config.empty()) {
            c = load_config(o.config);
            if (c.kind != ExperimentKind::probe || c.probe.kind != *kind)
                throw ConfigError("config does not describe a " + o.kind + " probe");
        } else {
            c.probe = default_probe(*kind);
        }
        apply_overrides(c, o);
        validate(c.probe.kind, c.probe.params);
        return finish(run_experiment(c), c, o);
    }
    if (verb == "report") {
        std::ifstream in(o.input);
        if (!in) throw IoError("cannot read record '" + o.input + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        const RunRecord rec = read_jsonl(ss.str());
        const std::string dir = o.out.empty() ? "." : o.out;
        const std::string path = emit_report(rec, parse_format(o.format), dir);
        std::cout << "report written to " << path << "\n";
        return 0;
    }
    const ExperimentKind k = verb == "sweep" ? ExperimentKind::sweep
                             : verb == "solve" ? ExperimentKind::solve
                                               : ExperimentKind::lipschitz;
    if (k == ExperimentKind::sweep && o.config.empty()) throw ConfigError("sweep needs --config");
    const ExperimentConfig c = base_config(o, k);
    return finish(run_experiment(c), c, o);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Estimate probes, sweeps and solves for the cubic Airy-dispersive equation"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "configuration file");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--resolution", o.resolution, "resolution multiplier");
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "svg", "table", "jsonl"}));
    };
    auto* verify = app.add_subcommand("verify", "run one estimate probe");
    verify->add_option("kind", o.kind, "estimate kind, e.g. TRILINEAR_T2")->required();
    verify->add_option("--samples", o.samples, "samples per dilation");
    common(verify);
    auto* sweep = app.add_subcommand("sweep", "scaling sweep over the configured dilations");
    common(sweep);
    auto* solve = app.add_subcommand("solve", "Picard solve with reference cross-check");
    common(solve);
    auto* lip = app.add_subcommand("lipschitz", "data-to-solution Lipschitz quotients");
    common(lip);
    auto* report = app.add_subcommand("report", "re-render a saved record.jsonl");
    report->add_option("record", o.input, "record file (report.jsonl)")->required();
    report->add_option("--out", o.out, "output directory");
    report->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "svg", "table", "jsonl"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        return run(o, verb);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
}
