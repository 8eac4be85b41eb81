#pragma once

#include "mkdv/norms.hpp"
#include "mkdv/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mkdv {

// One CSV row. For every row ratio = lhs / rhs: probe rows store the
// effective right side (scale * rhs), solve rows store successive Picard
// distances, Lipschitz rows the solution and data differences.
struct RecordRow {
    std::string kind;
    Rational r{2};
    Rational s{0};
    Rational b{0};
    Rational b_prime{0};
    double lambda = 1.0;
    std::size_t sample_id = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct RecordSummary {
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double spread = 0.0;  // max / median
    bool flagged = false;
    std::optional<double> slope;
    std::optional<double> predicted_slope;
    std::optional<double> cap;
};

struct Snapshot {
    double t;
    SpectralField u;
};

// Append-only log of one experiment.
struct RunRecord {
    std::uint64_t config_hash = 0;
    std::string timestamp;   // UTC, ISO 8601
    std::string experiment;  // probe | sweep | solve | lipschitz
    std::string kind;        // estimate kind, PICARD or LIPSCHITZ
    std::vector<RecordRow> rows;
    RecordSummary summary;
    std::vector<std::string> notes;
    std::vector<Snapshot> snapshots;
    bool partial = false;
    std::string failure;
    int failure_code = 0;  // CLI exit code of the error that cut the run short

    void append(RecordRow row) { rows.push_back(std::move(row)); }
};

std::string utc_timestamp();

enum class ReportFormat { table, csv, svg, jsonl };
ReportFormat parse_format(const std::string& s);

// Text of one report; EmptyRecordError for a record without rows.
std::string render(const RunRecord& rec, ReportFormat f);

// Writes report.<ext> into dir (created if needed); IoError on failure.
// Returns the path written.
std::string emit_report(const RunRecord& rec, ReportFormat f, const std::string& dir);

// The CSV header, stable: kind,r,s,b,b_prime,lambda,sample_id,lhs,rhs,ratio
extern const char* const csv_header;

// Rebuilds a record from its JSONL rendering.
RunRecord read_jsonl(const std::string& text);

// Parses the rows back from CSV text (summary, slope and partial rows skipped).
std::vector<RecordRow> read_csv_rows(const std::string& text);

}  // namespace mkdv
