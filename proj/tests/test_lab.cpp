#include "mkdv/config.hpp"
#include "mkdv/errors.hpp"
#include "mkdv/experiment.hpp"
#include "mkdv/record.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace mkdv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("mkdv_lab_test_" + name);
    fs::remove_all(p);
    return p;
}

int lab(const std::string& args)
{
    const std::string cmd = std::string(MKDV_LAB) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig t2_probe(std::uint64_t seed)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::probe;
    c.seed = seed;
    c.probe = default_probe(EstimateKind::TRILINEAR_T2);
    c.probe.seed = seed;
    c.probe.samples = 2;
    c.probe.dilations = {1.0};
    return c;
}

}  // namespace

TEST_CASE("shipped configurations parse and round trip")
{
    for (const auto& entry : fs::directory_iterator(CONFIG_DIR)) {
        CAPTURE(entry.path().string());
        const ExperimentConfig c = load_config(entry.path().string());
        const std::string canon = serialize(c);
        CHECK(serialize(parse_config(canon)) == canon);
        CHECK(config_hash(parse_config(canon)) == config_hash(c));
    }
}

TEST_CASE("hash ignores key order, spacing and comments")
{
    const std::string a = "[experiment]\nkind = probe\nseed = 4\n[probe]\nestimate = FS_AIRY\nsamples = 3\n";
    const std::string b = "; same thing\n[probe]\nsamples=3\n  estimate =   FS_AIRY\n\n[experiment]\nseed = 4\nkind = probe\n";
    CHECK(config_hash(parse_config(a)) == config_hash(parse_config(b)));
    const std::string c = "[experiment]\nkind = probe\nseed = 5\n[probe]\nestimate = FS_AIRY\nsamples = 3\n";
    CHECK(config_hash(parse_config(a)) != config_hash(parse_config(c)));
}

TEST_CASE("exact rationals")
{
    CHECK(parse_rational("0.55") == Rational(11, 20));
    CHECK(parse_rational("-2/5") == Rational(-2, 5));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("2.5e1") == Rational(25));
    CHECK(format_rational(Rational(-17, 40)) == "-17/40");
    CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
    CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
}

TEST_CASE("configuration errors list every problem")
{
    try {
        parse_config("[experiment]\nkind = probe\nbogus = 1\n[probe]\nestimate = FS_AIRY\nwat = 2\n");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        CHECK(m.find("bogus") != std::string::npos);
        CHECK(m.find("wat") != std::string::npos);
        CHECK(m.find("seed") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(""), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\nkind = probe\nseed = 1\n[probe]\nestimate = TRILINEAR_T2\nr = 6/5\n"),
                    RangeError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), IoError);
}

TEST_CASE("records: deterministic CSV, consistent ratios, JSONL round trip")
{
    const RunRecord a = run_experiment(t2_probe(7)), b = run_experiment(t2_probe(7));
    CHECK(render(a, ReportFormat::csv) == render(b, ReportFormat::csv));
    CHECK(render(a, ReportFormat::csv).rfind(std::string(csv_header) + "\n", 0) == 0);
    const auto rows = read_csv_rows(render(a, ReportFormat::csv));
    REQUIRE(rows.size() == a.rows.size());
    for (const auto& r : rows) CHECK(std::abs(r.ratio - r.lhs / r.rhs) <= 1e-12 * r.ratio);
    const RunRecord back = read_jsonl(render(a, ReportFormat::jsonl));
    CHECK(render(back, ReportFormat::csv) == render(a, ReportFormat::csv));
    CHECK(back.config_hash == a.config_hash);
}

TEST_CASE("SVG slope annotation matches the CSV slope row")
{
    ExperimentConfig c;
    c.kind = ExperimentKind::probe;
    c.probe = default_probe(EstimateKind::LEMMA2_DELTA);
    c.probe.samples = 2;
    c.probe.dilations = {1.0, 0.5, 0.25};
    const RunRecord rec = run_experiment(c);
    REQUIRE(rec.summary.slope.has_value());
    std::smatch m;
    const std::string svg = render(rec, ReportFormat::svg);
    REQUIRE(std::regex_search(svg, m, std::regex("data-slope=\"([^\"]+)\"")));
    const double svg_slope = std::stod(m[1]);
    const std::string csv = render(rec, ReportFormat::csv);
    REQUIRE(std::regex_search(csv, m, std::regex(",all,slope,([^,]+),")));
    CHECK(svg_slope == std::stod(m[1]));
}

TEST_CASE("empty records and unwritable outputs")
{
    RunRecord empty;
    CHECK_THROWS_AS(render(empty, ReportFormat::csv), EmptyRecordError);
    const RunRecord rec = run_experiment(t2_probe(1));
    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "x";
    CHECK_THROWS_AS(emit_report(rec, ReportFormat::csv, (blocker / "sub").string()), IoError);
    const fs::path dir = scratch("emit");
    const std::string path = emit_report(rec, ReportFormat::csv, dir.string());
    CHECK(slurp(path) == render(rec, ReportFormat::csv));
}

TEST_CASE("command-line exit codes")
{
    const fs::path out = scratch("cli");
    SUBCASE("success writes the requested report")
    {
        CHECK(lab("verify TRILINEAR_T2 --samples 2 --seed 7 --format csv --out " + out.string()) == 0);
        CHECK(fs::exists(out / "report.csv"));
        CHECK(fs::exists(out / "report.jsonl"));
        CHECK(lab("report " + (out / "report.jsonl").string() + " --format svg --out " + out.string()) == 0);
        CHECK(fs::exists(out / "report.svg"));
    }
    SUBCASE("precondition failures exit 1")
    {
        const fs::path cfg = scratch("bad.ini");
        std::ofstream(cfg) << "[experiment]\nkind = probe\nseed = 1\n[probe]\nestimate = TRILINEAR_T2\nr = 6/5\n";
        CHECK(lab("verify TRILINEAR_T2 --config " + cfg.string()) == 1);
        CHECK(lab("verify NOT_A_KIND") == 1);
        CHECK(lab("frobnicate") == 1);
    }
    SUBCASE("numerical failures exit 2")
    {
        const fs::path cfg = scratch("big.ini");
        std::ofstream(cfg) << "[experiment]\nkind = solve\nseed = 1\nout = " << out.string()
                           << "\n[solve]\ndelta = 1\namplitude = 6\nsteps_per_delta = 256\n"
                              "allow_outside_smallness = true\nreference_dt = 0\n";
        CHECK(lab("solve --config " + cfg.string()) == 2);
    }
    SUBCASE("i/o failures exit 3")
    {
        CHECK(lab("report /nonexistent/report.jsonl") == 3);
    }
}
