#include "mkdv/record.hpp"

#include "mkdv/config.hpp"
#include "mkdv/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace mkdv {

const char* const csv_header = "kind,r,s,b,b_prime,lambda,sample_id,lhs,rhs,ratio";

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require_rows(const RunRecord& rec)
{
    if (rec.rows.empty()) throw EmptyRecordError("the record has no rows to report");
}

std::string prefix(const RecordRow& r)
{
    return r.kind + "," + format_rational(r.r) + "," + format_rational(r.s) + "," + format_rational(r.b) + "," +
           format_rational(r.b_prime);
}

std::string render_csv(const RunRecord& rec)
{
    std::ostringstream os;
    os << csv_header << "\n";
    for (const auto& r : rec.rows)
        os << prefix(r) << "," << num(r.lambda) << "," << r.sample_id << "," << num(r.lhs) << "," << num(r.rhs)
           << "," << num(r.ratio) << "\n";
    const std::string head = prefix(rec.rows.front());
    const RecordSummary& s = rec.summary;
    os << head << ",all,summary," << num(s.max_ratio) << "," << num(s.median_ratio) << "," << num(s.spread) << "\n";
    if (s.slope) {
        const double pred = s.predicted_slope.value_or(0.0);
        os << head << ",all,slope," << num(*s.slope) << "," << num(pred) << ","
           << (pred != 0.0 ? num(*s.slope / pred) : std::string()) << "\n";
    }
    if (rec.partial) os << head << ",all,partial,,,\n";
    return os.str();
}

std::string render_table(const RunRecord& rec)
{
    std::map<double, std::vector<double>> by_lambda;
    for (const auto& r : rec.rows) by_lambda[r.lambda].push_back(r.ratio);
    std::ostringstream os;
    char line[160];
    os << rec.experiment << " " << rec.kind << "  (config " << std::hex << rec.config_hash << std::dec << ")\n";
    std::snprintf(line, sizeof line, "%14s %8s %14s %14s %14s\n", "lambda", "samples", "min ratio", "median ratio",
                  "max ratio");
    os << line;
    for (auto& [l, v] : by_lambda) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        const double med = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        std::snprintf(line, sizeof line, "%14.6g %8zu %14.6g %14.6g %14.6g\n", l, n, v.front(), med, v.back());
        os << line;
    }
    const RecordSummary& s = rec.summary;
    os << "max / median = " << short_num(s.spread) << (s.flagged ? "  FLAGGED (>= 10)" : "") << "\n";
    if (s.slope)
        os << "fitted slope = " << short_num(*s.slope) << "  predicted = " << short_num(s.predicted_slope.value_or(0))
           << "\n";
    if (s.cap) os << "explicit cap = " << short_num(*s.cap) << "\n";
    for (const auto& n : rec.notes) os << "note: " << n << "\n";
    if (rec.partial) os << "PARTIAL RUN: " << rec.failure << "\n";
    return os.str();
}

std::string render_svg(const RunRecord& rec)
{
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    const bool slope_plot = rec.summary.slope.has_value();
    const double pred = rec.summary.predicted_slope.value_or(0.0);
    // slope figures show lhs / rhs against delta, with the scale factor delta^pred undone
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rec.rows) {
        const double y = slope_plot ? r.ratio * std::pow(r.lambda, pred) : r.ratio;
        if (r.lambda > 0.0 && y > 0.0 && std::isfinite(y)) pts.emplace_back(std::log10(r.lambda), std::log10(y));
    }
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = x1 = pts[0].first;
        y0 = y1 = pts[0].second;
        for (const auto& [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  W, H, W, H);
    os << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">%s %s</text>\n",
                  ml, rec.experiment.c_str(), rec.kind.c_str());
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", ml, mt,
                  W - ml - mr, H - mt - mb);
    os << buf;
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      px(xv), H - mb + 16, short_num(std::pow(10.0, xv)).c_str());
        os << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                      "text-anchor=\"end\">%s</text>\n",
                      ml - 6, py(yv) + 4, short_num(std::pow(10.0, yv)).c_str());
        os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">%s "
                  "(log scale)</text>\n",
                  (ml + W - mr) / 2, H - 12, slope_plot ? "delta" : "dilation lambda");
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"14\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 14 %.1f)\">%s (log scale)</text>\n",
                  (mt + H - mb) / 2, (mt + H - mb) / 2, slope_plot ? "lhs / rhs" : "ratio");
    os << buf;
    for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.2\" fill=\"steelblue\" opacity=\"0.6\"/>\n",
                      px(x), py(y));
        os << buf;
    }
    if (slope_plot && pts.size() >= 2) {
        const double slope = *rec.summary.slope;
        // fitted line through the centroid with the recorded slope
        double cx = 0, cy = 0;
        for (const auto& [x, y] : pts) {
            cx += x;
            cy += y;
        }
        cx /= static_cast<double>(pts.size());
        cy /= static_cast<double>(pts.size());
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"firebrick\" stroke-width=\"1.5\"/>\n",
                      px(x0), py(cy + slope * (x0 - cx)), px(x1), py(cy + slope * (x1 - cx)));
        os << buf;
        os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 18
           << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"firebrick\" class=\"slope\" data-slope=\""
           << num(slope) << "\">fitted slope = " << short_num(slope) << " (predicted " << short_num(pred)
           << ")</text>\n";
    } else {
        std::map<double, double> top;
        for (const auto& [x, y] : pts) top[x] = top.count(x) ? std::max(top[x], y) : y;
        if (top.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : top) os << px(x) << "," << py(y) << " ";
            os << "\"/>\n";
        }
        os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 18
           << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"firebrick\">max / median = "
           << short_num(rec.summary.spread) << (rec.summary.flagged ? " FLAGGED" : "") << "</text>\n";
    }
    if (rec.partial)
        os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 36
           << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"black\">partial run</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string render_jsonl(const RunRecord& rec)
{
    using nlohmann::json;
    std::ostringstream os;
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(rec.config_hash));
    os << json{{"type", "run"},         {"config_hash", hash}, {"timestamp", rec.timestamp},
               {"experiment", rec.experiment}, {"kind", rec.kind},    {"partial", rec.partial},
               {"failure", rec.failure}}
              .dump()
       << "\n";
    for (const auto& r : rec.rows)
        os << json{{"type", "row"},          {"kind", r.kind},
                   {"r", format_rational(r.r)}, {"s", format_rational(r.s)},
                   {"b", format_rational(r.b)}, {"b_prime", format_rational(r.b_prime)},
                   {"lambda", r.lambda},     {"sample_id", r.sample_id},
                   {"lhs", r.lhs},           {"rhs", r.rhs},
                   {"ratio", r.ratio}}
                  .dump()
           << "\n";
    json s{{"type", "summary"},
           {"max_ratio", rec.summary.max_ratio},
           {"median_ratio", rec.summary.median_ratio},
           {"spread", rec.summary.spread},
           {"flagged", rec.summary.flagged}};
    if (rec.summary.slope) s["slope"] = *rec.summary.slope;
    if (rec.summary.predicted_slope) s["predicted_slope"] = *rec.summary.predicted_slope;
    if (rec.summary.cap) s["cap"] = *rec.summary.cap;
    os << s.dump() << "\n";
    for (const auto& snap : rec.snapshots) {
        json re = json::array(), im = json::array();
        for (const cplx& z : snap.u.coeffs()) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        os << json{{"type", "snapshot"},
                   {"t", snap.t},
                   {"half_length", snap.u.grid().half_length()},
                   {"modes", snap.u.grid().size()},
                   {"re", re},
                   {"im", im}}
                  .dump()
           << "\n";
    }
    for (const auto& n : rec.notes) os << json{{"type", "note"}, {"text", n}}.dump() << "\n";
    return os.str();
}

const char* extension(ReportFormat f)
{
    switch (f) {
    case ReportFormat::table: return "txt";
    case ReportFormat::csv: return "csv";
    case ReportFormat::svg: return "svg";
    case ReportFormat::jsonl: return "jsonl";
    }
    return "out";
}

}  // namespace

std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ReportFormat parse_format(const std::string& s)
{
    if (s == "table") return ReportFormat::table;
    if (s == "csv") return ReportFormat::csv;
    if (s == "svg") return ReportFormat::svg;
    if (s == "jsonl") return ReportFormat::jsonl;
    throw ParameterError("unknown report format '" + s + "' (csv, svg, table, jsonl)");
}

std::string render(const RunRecord& rec, ReportFormat f)
{
    require_rows(rec);
    switch (f) {
    case ReportFormat::table: return render_table(rec);
    case ReportFormat::csv: return render_csv(rec);
    case ReportFormat::svg: return render_svg(rec);
    case ReportFormat::jsonl: return render_jsonl(rec);
    }
    return {};
}

std::string emit_report(const RunRecord& rec, ReportFormat f, const std::string& dir)
{
    const std::string text = render(rec, f);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path path = fs::path(dir) / (std::string("report.") + extension(f));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
    return path.string();
}

RunRecord read_jsonl(const std::string& text)
{
    using nlohmann::json;
    RunRecord rec;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    try {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            const std::string type = j.at("type");
            if (type == "run") {
                header = true;
                rec.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
                rec.timestamp = j.at("timestamp");
                rec.experiment = j.at("experiment");
                rec.kind = j.at("kind");
                rec.partial = j.at("partial");
                rec.failure = j.at("failure");
            } else if (type == "row") {
                RecordRow r;
                r.kind = j.at("kind");
                r.r = parse_rational(j.at("r").get<std::string>());
                r.s = parse_rational(j.at("s").get<std::string>());
                r.b = parse_rational(j.at("b").get<std::string>());
                r.b_prime = parse_rational(j.at("b_prime").get<std::string>());
                r.lambda = j.at("lambda");
                r.sample_id = j.at("sample_id");
                r.lhs = j.at("lhs");
                r.rhs = j.at("rhs");
                r.ratio = j.at("ratio");
                rec.rows.push_back(r);
            } else if (type == "summary") {
                rec.summary.max_ratio = j.at("max_ratio");
                rec.summary.median_ratio = j.at("median_ratio");
                rec.summary.spread = j.at("spread");
                rec.summary.flagged = j.at("flagged");
                if (j.contains("slope")) rec.summary.slope = j.at("slope").get<double>();
                if (j.contains("predicted_slope")) rec.summary.predicted_slope = j.at("predicted_slope").get<double>();
                if (j.contains("cap")) rec.summary.cap = j.at("cap").get<double>();
            } else if (type == "snapshot") {
                const Grid1D g(j.at("half_length").get<double>(), j.at("modes").get<std::size_t>(),
                               Representation::periodic_fft);
                const auto& re = j.at("re");
                const auto& im = j.at("im");
                std::vector<cplx> c(g.size());
                for (std::size_t k = 0; k < c.size(); ++k) c[k] = {re.at(k).get<double>(), im.at(k).get<double>()};
                rec.snapshots.push_back({j.at("t").get<double>(), SpectralField(g, std::move(c))});
            } else if (type == "note") {
                rec.notes.push_back(j.at("text"));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed record line: ") + e.what());
    }
    if (!header) throw ParameterError("not a run record (no header line)");
    return rec;
}

std::vector<RecordRow> read_csv_rows(const std::string& text)
{
    std::vector<RecordRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line != csv_header) throw ParameterError("not a record CSV (unexpected header)");
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() < 10 || f[6].empty() || !std::isdigit(static_cast<unsigned char>(f[6][0]))) continue;
        RecordRow r;
        r.kind = f[0];
        r.r = parse_rational(f[1]);
        r.s = parse_rational(f[2]);
        r.b = parse_rational(f[3]);
        r.b_prime = parse_rational(f[4]);
        r.lambda = std::stod(f[5]);
        r.sample_id = std::stoul(f[6]);
        r.lhs = std::stod(f[7]);
        r.rhs = std::stod(f[8]);
        r.ratio = std::stod(f[9]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace mkdv
