#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "goldcheck/conjecture.hpp"
#include "goldcheck/search.hpp"
#include "goldcheck/summary.hpp"

namespace goldcheck {

enum class RecordFormat { Ndjson, Csv };

std::string format_name(RecordFormat format);
RecordFormat parse_format(const std::string& name);

// Record stream for one summary:
//   equality_case  n, k, pk, family, r, factors
//   anomaly        n, k
//   counterexample n, k
//   summary        every counter, extremes, histogram, record_count (always last)
// NDJSON keys and CSV columns appear in exactly this order. The summary record is
// the completeness marker: a stream without it, or whose record_count disagrees,
// is rejected by parse_records.
std::size_t emit_records(const RangeSummary& summary, RecordFormat format, std::ostream& out);

// Writes `<path>.partial`, then renames it to `path`. On failure the partial file
// is left under its marked name and IoError is thrown.
std::size_t emit_records(const RangeSummary& summary, RecordFormat format, const std::filesystem::path& path);

RangeSummary parse_records(std::istream& in, RecordFormat format);

// Equality-case records alone, in the same per-record layout as emit_records.
std::size_t emit_edge_cases(const std::vector<EdgeCaseRecord>& records, RecordFormat format, std::ostream& out);

std::string sha256_hex(const std::string& bytes);

// SHA-256 of the canonical NDJSON record stream.
std::string summary_digest(const RangeSummary& summary);

struct RunManifest {
    std::string tool_version;
    std::uint64_t table_limit = 0;
    RangeJob job;
    std::string started_at;
    std::string finished_at;
    std::chrono::nanoseconds elapsed{0};
    double throughput = 0;
    std::string summary_digest;
};

RunManifest make_manifest(const RangeJob& job, const RangeSummary& summary,
                          std::chrono::system_clock::time_point started,
                          std::chrono::system_clock::time_point finished);
nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

// Re-parses an emitted record stream and checks it against the stored digest.
bool manifest_matches_records(const RunManifest& manifest, std::istream& records, RecordFormat format);

std::string iso8601_utc(std::chrono::system_clock::time_point t);

void render_proof_trace(const LemmaTrace& trace, std::ostream& out);
void render_descent_trace(const DescentTrace& trace, std::ostream& out);

}  // namespace goldcheck
