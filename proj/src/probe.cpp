#include "mkdv/probe.hpp"

#include "mkdv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mkdv {

namespace {

struct KindEntry {
    EstimateKind kind;
    std::string_view name;
};

constexpr std::array<KindEntry, 15> kind_table{{
    {EstimateKind::L8_STRICHARTZ, "L8_STRICHARTZ"},
    {EstimateKind::LEMMA4, "LEMMA4"},
    {EstimateKind::FS_AIRY, "FS_AIRY"},
    {EstimateKind::COR3_GENERAL, "COR3_GENERAL"},
    {EstimateKind::XNORM_30, "XNORM_30"},
    {EstimateKind::XNORM_31, "XNORM_31"},
    {EstimateKind::BILINEAR_L3, "BILINEAR_L3"},
    {EstimateKind::COR_K1, "COR_K1"},
    {EstimateKind::COR_K2, "COR_K2"},
    {EstimateKind::COR_K10, "COR_K10"},
    {EstimateKind::LEMMA2_DELTA, "LEMMA2_DELTA"},
    {EstimateKind::HOMOG_5, "HOMOG_5"},
    {EstimateKind::EMBED_4, "EMBED_4"},
    {EstimateKind::EMBED_52, "EMBED_52"},
    {EstimateKind::TRILINEAR_T2, "TRILINEAR_T2"},
}};

std::string str(const Rational& q)
{
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

const Rational zero{0};
const Rational one{1};
const Rational half{1, 2};
const Rational quarter{1, 4};

void check_r_scale(std::vector<std::string>& v, const Rational& r)
{
    if (!(r > one && r <= Rational{2})) v.push_back("r must satisfy 1 < r ≤ 2 (got r = " + str(r) + ")");
}

// 1/r = 2/p + 1/q with one of the three admissible (p, q) regions.
void check_strichartz(std::vector<std::string>& v, const ProbeParams& p)
{
    const Rational& a = p.inv_p;
    const Rational& c = p.inv_q;
    if (a < zero || c < zero) v.push_back("1/p and 1/q must be nonnegative");
    if (one / p.r != 2 * a + c)
        v.push_back("exponents must satisfy 1/r = 2/p + 1/q (got 1/r = " + str(one / p.r) + ", 2/p + 1/q = " +
                    str(2 * a + c) + ")");
    const bool i = a >= zero && a <= quarter && c >= zero && c < quarter;
    const bool ii = quarter <= c && c <= c + a && c + a < half;
    const bool iii = a == zero && c == half;
    if (!(i || ii || iii))
        v.push_back("(p, q) must satisfy one of: 0 ≤ 1/p ≤ 1/4 and 0 ≤ 1/q < 1/4; 1/4 ≤ 1/q ≤ 1/q + 1/p < 1/2; "
                    "(p, q) = (∞, 2)");
    if (p.r <= one) v.push_back("r must satisfy r > 1 (got r = " + str(p.r) + ")");
}

void check_k1(std::vector<std::string>& v, const ProbeParams& p)
{
    if (!(p.b > half)) v.push_back("b must satisfy b > 1/2 (got b = " + str(p.b) + ")");
    if (!(p.s >= zero && p.s <= half)) v.push_back("s must satisfy 1/2 ≥ s ≥ 0 (got s = " + str(p.s) + ")");
    const Rational bound = Rational{1, 6} + Rational{2, 3} * p.s;
    if (!(p.b_tilde > bound))
        v.push_back("b~ must satisfy b~ > 1/6 + 2s/3 = " + str(bound) + " (got b~ = " + str(p.b_tilde) + ")");
}

}  // namespace

std::string_view kind_name(EstimateKind k)
{
    for (const auto& e : kind_table)
        if (e.kind == k) return e.name;
    return "UNKNOWN";
}

std::optional<EstimateKind> parse_kind(std::string_view name)
{
    for (const auto& e : kind_table)
        if (e.name == name) return e.kind;
    return std::nullopt;
}

const std::vector<EstimateKind>& all_kinds()
{
    static const std::vector<EstimateKind> kinds = [] {
        std::vector<EstimateKind> v;
        for (const auto& e : kind_table) v.push_back(e.kind);
        return v;
    }();
    return kinds;
}

ProbeParams default_params(EstimateKind k)
{
    ProbeParams p;
    switch (k) {
    case EstimateKind::L8_STRICHARTZ:
        p.r = 2;
        p.inv_p = p.inv_q = Rational{1, 8};
        break;
    case EstimateKind::LEMMA4:
        p.inv_p = quarter;
        p.inv_q = Rational{1, 8};
        p.r = Rational{8, 5};
        p.sigma = quarter;
        break;
    case EstimateKind::FS_AIRY:
        p.r = 2;
        p.inv_p = p.inv_q = Rational{1, 6};
        break;
    case EstimateKind::COR3_GENERAL:
        // case ii): 1/q = 1/3, 1/p = 1/12
        p.r = 2;
        p.inv_p = Rational{1, 12};
        p.inv_q = Rational{1, 3};
        break;
    case EstimateKind::XNORM_30:
    case EstimateKind::XNORM_31:
        p.r = 2;
        p.inv_p = p.inv_q = Rational{1, 6};
        p.b = Rational{11, 20};
        break;
    case EstimateKind::BILINEAR_L3:
        p.r = 2;
        p.s = half;
        break;
    case EstimateKind::COR_K1:
    case EstimateKind::COR_K2:
        p.r = 2;
        p.s = quarter;
        p.b = Rational{11, 20};
        p.b_tilde = Rational{23, 60};  // 1/6 + 2s/3 + 1/20
        break;
    case EstimateKind::COR_K10:
        p.r = Rational{3, 2};
        p.sigma = Rational{1, 6};
        p.beta = Rational{11, 20};
        p.b_prime = Rational{-9, 20};  // < -(1/3)(1/3 + 1/3) = -2/9
        break;
    case EstimateKind::LEMMA2_DELTA:
        p.r = 2;
        p.s = 0;
        p.b = Rational{3, 5};
        p.b_prime = Rational{-3, 10};
        break;
    case EstimateKind::HOMOG_5:
        p.r = Rational{3, 2};
        p.s = quarter;
        p.b = Rational{3, 4};
        break;
    case EstimateKind::EMBED_4:
        p.r1 = Rational{3, 2};
        p.s1 = quarter;
        p.b1 = Rational{43, 60};  // 1/r1 + 1/20
        p.r0 = 2;
        p.s0 = 0;
        p.b0 = half;
        break;
    case EstimateKind::EMBED_52:
        p.r = Rational{3, 2};
        p.s = quarter;
        p.b = Rational{43, 60};
        break;
    case EstimateKind::TRILINEAR_T2:
        p.r = 2;
        p.s = quarter;
        p.b = Rational{11, 20};
        p.b_prime = Rational{-17, 40};  // 1/(2r) - 5/8 - 1/20
        break;
    }
    return p;
}

std::vector<std::string> violations(EstimateKind k, const ProbeParams& p)
{
    std::vector<std::string> v;
    switch (k) {
    case EstimateKind::L8_STRICHARTZ:
    case EstimateKind::BILINEAR_L3:
        break;
    case EstimateKind::LEMMA4:
        if (!(p.inv_q > zero && p.inv_q < quarter)) v.push_back("q must satisfy 4 < q < ∞");
        if (one / p.r != half + p.inv_q)
            v.push_back("r must satisfy 1/r = 1/2 + 1/q (got 1/r = " + str(one / p.r) + ", 1/2 + 1/q = " +
                        str(half + p.inv_q) + ")");
        break;
    case EstimateKind::FS_AIRY:
        if (p.inv_p != p.inv_q) v.push_back("exponents must satisfy p = q");
        if (p.inv_p * 3 * p.r != one) v.push_back("exponents must satisfy p = 3r");
        if (!(p.r > Rational{4, 3} && p.r <= Rational{2}))
            v.push_back("r must satisfy 2 ≥ r > 4/3 (got r = " + str(p.r) + ")");
        break;
    case EstimateKind::COR3_GENERAL:
        check_strichartz(v, p);
        break;
    case EstimateKind::XNORM_30:
    case EstimateKind::XNORM_31:
        check_strichartz(v, p);
        check_r_scale(v, p.r);
        if (!(p.b > one / p.r)) v.push_back("b must satisfy b > 1/r (got b = " + str(p.b) + ")");
        break;
    case EstimateKind::COR_K1:
    case EstimateKind::COR_K2:
        check_k1(v, p);
        break;
    case EstimateKind::COR_K10: {
        check_r_scale(v, p.r);
        const Rational inv_rp = one - one / p.r;
        if (!(zero <= p.sigma && p.sigma <= inv_rp))
            v.push_back("sigma must satisfy 0 ≤ sigma ≤ 1/r' = " + str(inv_rp) + " (got " + str(p.sigma) + ")");
        if (!(inv_rp < p.beta)) v.push_back("beta must satisfy beta > 1/r' = " + str(inv_rp));
        const Rational bound = -(inv_rp + 2 * p.sigma) / 3;
        if (!(p.b_prime < bound))
            v.push_back("b' must satisfy b' < -(1/3)(1/r' + 2 sigma) = " + str(bound) + " (got " + str(p.b_prime) +
                        ")");
        break;
    }
    case EstimateKind::LEMMA2_DELTA: {
        check_r_scale(v, p.r);
        const Rational inv_rp = one - one / p.r;
        if (!(p.b_prime + 1 >= p.b)) v.push_back("b, b' must satisfy b' + 1 ≥ b");
        if (!(p.b >= zero)) v.push_back("b must satisfy b ≥ 0");
        if (!(p.b_prime <= zero)) v.push_back("b' must satisfy 0 ≥ b'");
        if (!(p.b_prime > -inv_rp)) v.push_back("b' must satisfy b' > -1/r' = " + str(-inv_rp));
        break;
    }
    case EstimateKind::HOMOG_5:
        check_r_scale(v, p.r);
        break;
    case EstimateKind::EMBED_4:
        check_r_scale(v, p.r0);
        check_r_scale(v, p.r1);
        if (!(p.r1 <= p.r0)) v.push_back("exponents must satisfy r1 ≤ r0");
        if (!(p.s1 - one / p.r1 > p.s0 - one / p.r0)) v.push_back("regularity must satisfy s1 - 1/r1 > s0 - 1/r0");
        if (!(p.b1 - one / p.r1 > p.b0 - one / p.r0)) v.push_back("modulation must satisfy b1 - 1/r1 > b0 - 1/r0");
        break;
    case EstimateKind::EMBED_52:
        check_r_scale(v, p.r);
        if (!(p.b > one / p.r)) v.push_back("b must satisfy b > 1/r (got b = " + str(p.b) + ")");
        break;
    case EstimateKind::TRILINEAR_T2: {
        if (!(p.r > Rational{4, 3} && p.r <= Rational{2}))
            v.push_back("r must satisfy 2 ≥ r > 4/3 (got r = " + str(p.r) + ")");
        else if (!(p.s >= scale_exponent(p.r)))
            v.push_back("s must satisfy s ≥ s(r) = 1/2 - 1/(2r) = " + str(scale_exponent(p.r)));
        const Rational bound = one / (2 * p.r) - Rational{5, 8};
        if (!(p.b_prime < bound))
            v.push_back("b' must satisfy b' < 1/(2r) - 5/8 = " + str(bound) + " (got " + str(p.b_prime) + ")");
        if (!(p.b > one / p.r)) v.push_back("b must satisfy b > 1/r (got b = " + str(p.b) + ")");
        break;
    }
    }
    return v;
}

void validate(EstimateKind k, const ProbeParams& p)
{
    const auto v = violations(k, p);
    if (v.empty()) return;
    std::string msg = std::string(kind_name(k)) + ": ";
    for (std::size_t i = 0; i < v.size(); ++i) msg += (i ? "; " : "") + v[i];
    throw RangeError(msg);
}

ProbeConfig default_probe(EstimateKind k)
{
    ProbeConfig c;
    c.kind = k;
    c.params = default_params(k);
    c.dilations.clear();
    if (k == EstimateKind::LEMMA2_DELTA) {
        for (int j = 0; j <= 6; ++j) c.dilations.push_back(std::ldexp(1.0, -j));
    } else {
        for (int j = -3; j <= 3; ++j) c.dilations.push_back(std::ldexp(1.0, j));
    }
    FamilySpec& f = c.family;
    switch (k) {
    case EstimateKind::L8_STRICHARTZ:
    case EstimateKind::LEMMA4:
    case EstimateKind::FS_AIRY:
    case EstimateKind::COR3_GENERAL:
        f.width_min = 0.4;
        f.width_max = 0.7;
        break;
    case EstimateKind::BILINEAR_L3:
    case EstimateKind::HOMOG_5:
        break;
    case EstimateKind::XNORM_30:
    case EstimateKind::XNORM_31:
    case EstimateKind::EMBED_4:
    case EstimateKind::EMBED_52:
        f.width_min = 0.2;
        f.width_max = 0.35;
        f.gammas = {1, 0, -1};
        break;
    case EstimateKind::COR_K1:
    case EstimateKind::COR_K2:
    case EstimateKind::COR_K10:
        f.width_min = 0.2;
        f.width_max = 0.35;
        f.gammas = {1, 0, -1};
        break;
    case EstimateKind::LEMMA2_DELTA:
        f.width_min = 0.3;
        f.width_max = 0.5;
        f.omega_min = 0.5;
        f.omega_max = 2.0;
        f.t_centre_max = 0.5;
        f.nu_max = 0.5;
        break;
    case EstimateKind::TRILINEAR_T2:
        f.width_min = 0.2;
        f.width_max = 0.35;
        f.omega_min = 6.0;
        f.omega_max = 12.0;
        break;
    }
    return c;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw ShapeError("slope fit needs two or more matching points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("log-log fit needs positive data");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw DomainError("log-log fit needs two distinct abscissae");
    const double slope = (n * sxy - sx * sy) / den;
    const double intercept = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = std::log(y[i]) - (intercept + slope * std::log(x[i]));
        ss += e * e;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

Region classify_triple(double xi1, double xi2, double xi3)
{
    std::array<double, 3> a{std::abs(xi1), std::abs(xi2), std::abs(xi3)};
    std::sort(a.begin(), a.end());
    const double mn = a[0], md = a[1], mx = a[2];
    if (mx <= 1.0 || mx <= 4.0 * mn) return Region::A;
    if (mx > 4.0 * md) return Region::C;
    return Region::B;
}

namespace {

// int_R <x>^{-a} dx for a > 1.
double japanese_integral(double a)
{
    return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (a - 1.0)) / std::tgamma(0.5 * a);
}

double median(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(m), v.end());
    const double hi = v[m];
    if (v.size() % 2) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(m));
    return 0.5 * (lo + hi);
}

}  // namespace

double embed4_cap(const ProbeParams& p)
{
    validate(EstimateKind::EMBED_4, p);
    const Rational inv_rho = one / p.r1 - one / p.r0;
    if (inv_rho == zero) return 1.0;  // same exponent: the weights are pointwise bounded by 1
    const double rho = 1.0 / to_double(inv_rho);
    const double ds = to_double(p.s1 - p.s0) * rho;
    const double db = to_double(p.b1 - p.b0) * rho;
    return std::pow(japanese_integral(ds), 1.0 / rho) * std::pow(japanese_integral(db), 1.0 / rho);
}

double embed52_cap(const ProbeParams& p)
{
    validate(EstimateKind::EMBED_52, p);
    const double r = to_double(p.r);
    const double b = to_double(p.b);
    return std::pow(japanese_integral(b * r), 1.0 / r) / std::sqrt(2.0 * std::numbers::pi);
}

EstimateReport run_probe(const ProbeConfig& config, const SampleSink& sink)
{
    validate(config.kind, config.params);
    if (config.samples == 0) throw ParameterError("a probe needs at least one sample");
    if (config.dilations.empty()) throw ParameterError("a probe needs at least one dilation");
    for (double l : config.dilations)
        if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("dilations must be positive and finite");
    if (!(config.resolution > 0.0)) throw ParameterError("resolution must be positive");

    EstimateReport rep;
    rep.kind = config.kind;
    rep.params = config.params;
    rep.seed = config.seed;

    if (config.resolution_check) {
        const double l0 = config.dilations.front();
        const Evaluation a = evaluate_kind(config, 0, l0, config.resolution);
        const Evaluation b = evaluate_kind(config, 0, l0, 2.0 * config.resolution);
        auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
        const double dl = rel(a.lhs, b.lhs);
        const double dr = rel(a.rhs, b.rhs);
        std::ostringstream os;
        os << "resolution check: doubling changes lhs by " << dl << ", rhs by " << dr;
        rep.diagnostics.push_back(os.str());
        if ((dl > 0.01 && b.lhs > 1e-12 * b.rhs) || dr > 0.01)
            throw ResolutionError(std::string(kind_name(config.kind)) + ": " + os.str() + " (limit 1%)");
    }

    for (double lambda : config.dilations) {
        for (std::size_t id = 0; id < config.samples; ++id) {
            const Evaluation e = evaluate_kind(config, id, lambda, config.resolution);
            const double ratio = e.rhs > 0.0 ? e.lhs / (e.scale * e.rhs) : 0.0;
            if (!std::isfinite(ratio) || ratio < 0.0)
                throw NumericalError(std::string(kind_name(config.kind)) + ": non-finite ratio at sample " +
                                     std::to_string(id));
            rep.samples.push_back({id, lambda, e.lhs, e.rhs, ratio, e.scale});
            if (sink) sink(rep.samples.back());
            if (!e.note.empty()) rep.diagnostics.push_back(e.note);
        }
    }

    std::vector<double> all;
    for (const auto& s : rep.samples) all.push_back(s.ratio);
    rep.max_ratio = *std::max_element(all.begin(), all.end());
    rep.min_ratio = *std::min_element(all.begin(), all.end());
    rep.median_ratio = median(all);
    rep.spread = rep.median_ratio > 0.0 ? rep.max_ratio / rep.median_ratio : 0.0;

    double lo_max = infinity, hi_max = 0.0;
    for (double lambda : config.dilations) {
        std::vector<double> v;
        for (const auto& s : rep.samples)
            if (s.lambda == lambda) v.push_back(s.ratio);
        const LambdaSummary ls{lambda, *std::max_element(v.begin(), v.end()), *std::min_element(v.begin(), v.end()),
                               median(v)};
        rep.per_lambda.push_back(ls);
        lo_max = std::min(lo_max, ls.max_ratio);
        hi_max = std::max(hi_max, ls.max_ratio);
    }
    rep.lambda_spread = lo_max > 0.0 ? hi_max / lo_max : 0.0;
    rep.flagged = rep.spread >= EstimateReport::spread_limit;

    if (config.kind == EstimateKind::LEMMA2_DELTA && config.dilations.size() >= 2) {
        std::vector<double> xs, ys;
        double min_slope = infinity;
        for (std::size_t id = 0; id < config.samples; ++id) {
            std::vector<double> sx, sy;
            for (const auto& s : rep.samples)
                if (s.sample_id == id) {
                    sx.push_back(s.lambda);
                    sy.push_back(s.lhs / s.rhs);
                }
            min_slope = std::min(min_slope, fit_loglog(sx, sy).slope);
            xs.insert(xs.end(), sx.begin(), sx.end());
            ys.insert(ys.end(), sy.begin(), sy.end());
        }
        rep.slope = fit_loglog(xs, ys);
        rep.min_sample_slope = min_slope;
        rep.predicted_slope = 1.0 + to_double(config.params.b_prime - config.params.b);
    }
    if (config.kind == EstimateKind::EMBED_4) rep.cap = embed4_cap(config.params);
    if (config.kind == EstimateKind::EMBED_52) rep.cap = embed52_cap(config.params);
    if (config.kind == EstimateKind::TRILINEAR_T2) {
        for (std::size_t id = 0; id < config.region_samples && id < config.samples; ++id)
            rep.regions.push_back(trilinear_regions(config, id, 1.0, config.resolution));
        const double r = to_double(config.params.r);
        const double s = to_double(config.params.s);
        std::ostringstream os;
        os << "mu = 1/4 - 1/(3r) = " << 0.25 - 1.0 / (3.0 * r) << ", sigma = s/2 + 3/16 = " << 0.5 * s + 3.0 / 16.0;
        rep.diagnostics.push_back(os.str());
    }
    return rep;
}

EstimateReport scaling_sweep(ProbeConfig config, const std::vector<double>& lambdas, const SampleSink& sink)
{
    for (double l : lambdas)
        if (!(l > 0.0) || !std::isfinite(l)) throw RangeError("dilations must be positive and finite");
    config.dilations = lambdas;
    return run_probe(config, sink);
}

}  // namespace mkdv
