#include "mkdv/config.hpp"

#include "mkdv/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace mkdv {

namespace {

using boost::property_tree::ptree;

std::string trim(std::string_view s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        out.push_back(trim(s.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_digits(std::string_view s, long long& out)
{
    if (s.empty()) return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

double parse_double(const std::string& s)
{
    if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string& s)
{
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ConfigError("not a nonnegative integer: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s)
{
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError("not a boolean: '" + s + "'");
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

// 1/p from "p" text, with inf -> 0.
Rational inverse_exponent(const std::string& s)
{
    if (s == "inf" || s == "infinity") return Rational(0);
    const Rational p = parse_rational(s);
    if (p.numerator() <= 0) throw ConfigError("exponent must be positive or inf: '" + s + "'");
    return Rational(1) / p;
}

std::string exponent_text(const Rational& inv)
{
    return inv.numerator() == 0 ? "inf" : format_rational(Rational(1) / inv);
}

// Reads one section, recording unknown and duplicate keys and parse failures.
class Section {
public:
    Section(const ptree* node, std::string name, std::vector<std::string>& errors)
        : node_(node), name_(std::move(name)), errors_(errors)
    {
        if (!node_) return;
        std::set<std::string> seen;
        for (const auto& [k, v] : *node_) {
            if (!seen.insert(k).second) errors_.push_back("[" + name_ + "] key '" + k + "' given twice");
            values_[k] = trim(v.data());
        }
    }

    bool present() const { return node_ != nullptr; }

    template <class Fn>
    void read(const std::string& key, Fn fn)
    {
        known_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return;
        try {
            fn(it->second);
        } catch (const PreconditionError& e) {
            errors_.push_back("[" + name_ + "] " + key + ": " + e.what());
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    void finish()
    {
        for (const auto& [k, v] : values_)
            if (!known_.count(k)) errors_.push_back("unknown key '" + k + "' in [" + name_ + "]");
    }

private:
    const ptree* node_;
    std::string name_;
    std::vector<std::string>& errors_;
    std::map<std::string, std::string> values_;
    std::set<std::string> known_;
};

void read_rational(Section& sec, const std::string& key, Rational& dst)
{
    sec.read(key, [&](const std::string& v) { dst = parse_rational(v); });
}

template <class T>
void read_number(Section& sec, const std::string& key, T& dst)
{
    sec.read(key, [&](const std::string& v) {
        if constexpr (std::is_same_v<T, double>)
            dst = parse_double(v);
        else if constexpr (std::is_same_v<T, bool>)
            dst = parse_bool(v);
        else
            dst = static_cast<T>(parse_unsigned(v));
    });
}

void read_list(Section& sec, const std::string& key, std::vector<double>& dst)
{
    sec.read(key, [&](const std::string& v) {
        std::vector<double> out;
        for (const auto& item : split_list(v)) out.push_back(parse_double(item));
        dst = std::move(out);
    });
}

}  // namespace

std::string_view experiment_name(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::probe: return "probe";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::solve: return "solve";
    case ExperimentKind::lipschitz: return "lipschitz";
    }
    return "?";
}

Rational parse_rational(std::string_view text)
{
    const std::string s = trim(text);
    auto fail = [&]() -> Rational { throw ConfigError("not an exact number: '" + s + "'"); };
    if (s.empty()) return fail();
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        long long n = 0, d = 0;
        if (!parse_digits(trim(s.substr(0, slash)), n) || !parse_digits(trim(s.substr(slash + 1)), d)) return fail();
        if (d == 0) throw ConfigError("zero denominator in '" + s + "'");
        return Rational(n, d);
    }
    // [sign] digits [. digits] [e [sign] digits]
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    constexpr long long limit = std::numeric_limits<long long>::max() / 10;
    long long num = 0, den = 1;
    bool digits = false;
    auto take = [&](bool fraction) {
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            if (num > limit || (fraction && den > limit)) throw ConfigError("too many digits in '" + s + "'");
            num = num * 10 + (s[i++] - '0');
            if (fraction) den *= 10;
            digits = true;
        }
    };
    take(false);
    if (i < s.size() && s[i] == '.') {
        ++i;
        take(true);
    }
    if (!digits) return fail();
    Rational q(neg ? -num : num, den);
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        long long e = 0;
        std::string_view ev = std::string_view(s).substr(i + 1);
        if (!ev.empty() && ev.front() == '+') ev.remove_prefix(1);
        if (!parse_digits(ev, e) || e > 18 || e < -18) return fail();
        long long p = 1;
        for (long long k = 0; k < (e < 0 ? -e : e); ++k) p *= 10;
        q = e < 0 ? q / p : q * p;
        i = s.size();
    }
    if (i != s.size()) return fail();
    return q;
}

std::string format_rational(const Rational& q)
{
    std::string s = std::to_string(q.numerator());
    if (q.denominator() != 1) s += "/" + std::to_string(q.denominator());
    return s;
}

ExperimentConfig parse_config(std::string_view text)
{
    ptree tree;
    try {
        std::istringstream in{std::string(text)};
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    std::vector<std::string> errors, ranges;
    const std::set<std::string> sections{"experiment", "probe", "solve", "lipschitz"};
    for (const auto& [k, v] : tree) {
        if (v.empty() && !v.data().empty())
            errors.push_back("key '" + k + "' outside any section");
        else if (!sections.count(k))
            errors.push_back("unknown section [" + k + "]");
    }
    auto node = [&](const char* name) -> const ptree* {
        const auto it = tree.find(name);
        return it == tree.not_found() ? nullptr : &it->second;
    };

    ExperimentConfig c;
    Section ex(node("experiment"), "experiment", errors);
    if (!ex.present()) {
        errors.emplace_back("missing section [experiment]");
    } else {
        if (!ex.has("kind")) errors.emplace_back("[experiment] missing key 'kind'");
        if (!ex.has("seed")) errors.emplace_back("[experiment] missing key 'seed'");
    }
    ex.read("kind", [&](const std::string& v) {
        if (v == "probe") c.kind = ExperimentKind::probe;
        else if (v == "sweep") c.kind = ExperimentKind::sweep;
        else if (v == "solve") c.kind = ExperimentKind::solve;
        else if (v == "lipschitz") c.kind = ExperimentKind::lipschitz;
        else throw ConfigError("unknown experiment kind '" + v + "' (probe, sweep, solve, lipschitz)");
    });
    read_number(ex, "seed", c.seed);
    ex.read("out", [&](const std::string& v) {
        if (v.empty()) throw ConfigError("empty output directory");
        c.out_dir = v;
    });
    read_list(ex, "resolutions", c.resolutions);
    ex.finish();
    for (double r : c.resolutions)
        if (!(r > 0.0)) errors.emplace_back("[experiment] resolutions must be positive");
    if (c.resolutions.empty()) errors.emplace_back("[experiment] resolutions must not be empty");

    const bool wants_probe = c.kind == ExperimentKind::probe || c.kind == ExperimentKind::sweep;
    Section pr(node("probe"), "probe", errors);
    if (wants_probe && !pr.present()) errors.emplace_back("missing section [probe]");
    if (pr.present() && !pr.has("estimate")) errors.emplace_back("[probe] missing key 'estimate'");
    pr.read("estimate", [&](const std::string& v) {
        const auto k = parse_kind(v);
        if (!k) throw ConfigError("unknown estimate kind '" + v + "'");
        c.probe = default_probe(*k);
    });
    ProbeParams& p = c.probe.params;
    read_rational(pr, "r", p.r);
    read_rational(pr, "s", p.s);
    read_rational(pr, "b", p.b);
    read_rational(pr, "b_prime", p.b_prime);
    pr.read("p", [&](const std::string& v) { p.inv_p = inverse_exponent(v); });
    pr.read("q", [&](const std::string& v) { p.inv_q = inverse_exponent(v); });
    read_rational(pr, "sigma", p.sigma);
    read_rational(pr, "b_tilde", p.b_tilde);
    read_rational(pr, "beta", p.beta);
    read_rational(pr, "r0", p.r0);
    read_rational(pr, "s0", p.s0);
    read_rational(pr, "b0", p.b0);
    read_rational(pr, "r1", p.r1);
    read_rational(pr, "s1", p.s1);
    read_rational(pr, "b1", p.b1);
    read_number(pr, "samples", c.probe.samples);
    read_list(pr, "dilations", c.probe.dilations);
    read_number(pr, "resolution_check", c.probe.resolution_check);
    read_number(pr, "region_samples", c.probe.region_samples);
    pr.finish();
    c.probe.seed = c.seed;
    c.probe.resolution = c.resolutions.empty() ? 1.0 : c.resolutions.front();
    if (pr.present()) {
        if (c.probe.samples == 0) errors.emplace_back("[probe] samples must be positive");
        if (c.probe.dilations.empty()) errors.emplace_back("[probe] dilations must not be empty");
        for (double l : c.probe.dilations)
            if (!(l > 0.0) || !std::isfinite(l)) errors.emplace_back("[probe] dilations must be positive and finite");
        for (const auto& v : violations(c.probe.kind, c.probe.params))
            ranges.push_back(std::string(kind_name(c.probe.kind)) + ": " + v);
    }

    const bool wants_solve = c.kind == ExperimentKind::solve || c.kind == ExperimentKind::lipschitz;
    Section so(node("solve"), "solve", errors);
    PicardConfig& pc = c.solve.picard;
    read_number(so, "delta", pc.delta);
    read_rational(so, "r", pc.r);
    read_rational(so, "s", pc.s);
    read_rational(so, "b", pc.b);
    read_rational(so, "b_prime", pc.b_prime);
    read_number(so, "amplitude", c.solve.amplitude);
    read_number(so, "width", c.solve.width);
    read_number(so, "centre", c.solve.centre);
    read_number(so, "half_length", pc.half_length);
    read_number(so, "modes", pc.modes);
    read_number(so, "steps_per_delta", pc.steps_per_delta);
    read_number(so, "max_iterations", pc.max_iterations);
    read_number(so, "tolerance", pc.tolerance);
    so.read("constant", [&](const std::string& v) {
        if (v == "auto") {
            c.solve.measure_constant = true;
        } else {
            c.solve.measure_constant = false;
            pc.constant = parse_double(v);
            pc.constant_source = "config";
        }
    });
    read_number(so, "nonlinear", pc.nonlinear);
    read_number(so, "allow_outside_smallness", pc.allow_outside_smallness);
    read_number(so, "reference_dt", c.solve.reference_dt);
    so.finish();
    if (wants_solve || so.present()) {
        for (const auto& v : violations(pc)) ranges.push_back("solve: " + v);
        if (!(c.solve.width > 0.0)) errors.emplace_back("[solve] width must be positive");
        if (!(c.solve.reference_dt >= 0.0)) errors.emplace_back("[solve] reference_dt must be >= 0");
    }

    Section li(node("lipschitz"), "lipschitz", errors);
    read_list(li, "epsilons", c.lipschitz.epsilons);
    read_number(li, "delta0", c.lipschitz.delta0);
    li.finish();
    if (c.kind == ExperimentKind::lipschitz || li.present()) {
        if (c.lipschitz.epsilons.empty()) errors.emplace_back("[lipschitz] epsilons must not be empty");
        for (double e : c.lipschitz.epsilons)
            if (e == 0.0 || !std::isfinite(e))
                errors.emplace_back("[lipschitz] epsilon = 0 gives an undefined quotient");
        if (!(c.lipschitz.delta0 > 0.0 && c.lipschitz.delta0 <= pc.delta))
            ranges.emplace_back("lipschitz: delta0 must lie in (0, delta]");
    }

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  - " + e;
        for (const auto& e : ranges) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    if (!ranges.empty()) {
        std::string msg = "parameters violate the estimate hypotheses:";
        for (const auto& e : ranges) msg += "\n  - " + e;
        throw RangeError(msg);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& c)
{
    std::ostringstream os;
    os << "[experiment]\n"
       << "kind = " << experiment_name(c.kind) << "\n"
       << "seed = " << c.seed << "\n"
       << "out = " << c.out_dir << "\n"
       << "resolutions = " << join(c.resolutions) << "\n";
    if (c.kind == ExperimentKind::probe || c.kind == ExperimentKind::sweep) {
        const ProbeParams& p = c.probe.params;
        os << "\n[probe]\n"
           << "estimate = " << kind_name(c.probe.kind) << "\n"
           << "r = " << format_rational(p.r) << "\n"
           << "s = " << format_rational(p.s) << "\n"
           << "b = " << format_rational(p.b) << "\n"
           << "b_prime = " << format_rational(p.b_prime) << "\n"
           << "p = " << exponent_text(p.inv_p) << "\n"
           << "q = " << exponent_text(p.inv_q) << "\n"
           << "sigma = " << format_rational(p.sigma) << "\n"
           << "b_tilde = " << format_rational(p.b_tilde) << "\n"
           << "beta = " << format_rational(p.beta) << "\n"
           << "r0 = " << format_rational(p.r0) << "\n"
           << "s0 = " << format_rational(p.s0) << "\n"
           << "b0 = " << format_rational(p.b0) << "\n"
           << "r1 = " << format_rational(p.r1) << "\n"
           << "s1 = " << format_rational(p.s1) << "\n"
           << "b1 = " << format_rational(p.b1) << "\n"
           << "samples = " << c.probe.samples << "\n"
           << "dilations = " << join(c.probe.dilations) << "\n"
           << "resolution_check = " << (c.probe.resolution_check ? "true" : "false") << "\n"
           << "region_samples = " << c.probe.region_samples << "\n";
    } else {
        const PicardConfig& pc = c.solve.picard;
        os << "\n[solve]\n"
           << "delta = " << fmt(pc.delta) << "\n"
           << "r = " << format_rational(pc.r) << "\n"
           << "s = " << format_rational(pc.s) << "\n"
           << "b = " << format_rational(pc.b) << "\n"
           << "b_prime = " << format_rational(pc.b_prime) << "\n"
           << "amplitude = " << fmt(c.solve.amplitude) << "\n"
           << "width = " << fmt(c.solve.width) << "\n"
           << "centre = " << fmt(c.solve.centre) << "\n"
           << "half_length = " << fmt(pc.half_length) << "\n"
           << "modes = " << pc.modes << "\n"
           << "steps_per_delta = " << pc.steps_per_delta << "\n"
           << "max_iterations = " << pc.max_iterations << "\n"
           << "tolerance = " << fmt(pc.tolerance) << "\n"
           << "constant = " << (c.solve.measure_constant ? std::string("auto") : fmt(pc.constant)) << "\n"
           << "nonlinear = " << (pc.nonlinear ? "true" : "false") << "\n"
           << "allow_outside_smallness = " << (pc.allow_outside_smallness ? "true" : "false") << "\n"
           << "reference_dt = " << fmt(c.solve.reference_dt) << "\n";
        if (c.kind == ExperimentKind::lipschitz)
            os << "\n[lipschitz]\n"
               << "epsilons = " << join(c.lipschitz.epsilons) << "\n"
               << "delta0 = " << fmt(c.lipschitz.delta0) << "\n";
    }
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& c)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : serialize(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace mkdv
