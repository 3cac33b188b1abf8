#include "goldcheck/report.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "goldcheck/errors.hpp"

namespace goldcheck {

using nlohmann::ordered_json;

namespace {

constexpr const char* kCsvHeader =
    "record,n,k,pk,family,r,factors,n_min,n_max,n_count,instances_evaluated,vacuous_count,strict_count,"
    "equal_count,counterexample_count,anomaly_count,max_first_witness_index,max_first_witness_n,"
    "max_first_witness_k,max_ratio_index,max_ratio_n,max_ratio_k,witness_index_sum,witness_index_histogram,"
    "record_count";
constexpr std::size_t kCsvColumns = 25;

template <class T>
std::string join(const std::vector<T>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(std::move(current));
    return parts;
}

std::uint64_t to_u64(const std::string& s, const char* field) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw FormatMismatch(std::string("CSV field ") + field + " is not a decimal integer: '" + s + "'");
    }
    return std::stoull(s);
}

ordered_json extreme_json(const std::optional<WitnessExtreme>& e) {
    if (!e) return nullptr;
    return ordered_json{{"index", e->index}, {"n", e->n}, {"k", e->k}};
}

std::optional<WitnessExtreme> extreme_from(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    return WitnessExtreme{j.at("index").get<std::size_t>(), j.at("n").get<std::uint64_t>(), j.at("k").get<std::size_t>()};
}

std::size_t record_count(const RangeSummary& s) {
    return s.equality_cases.size() + s.anomalies.size() + s.counterexamples.size() + 1;
}

ordered_json equality_json(const EdgeCaseRecord& e) {
    ordered_json j;
    j["record"] = "equality_case";
    const auto fields = edge_case_to_json(e);
    for (const auto& [key, value] : fields.items()) j[key] = value;
    return j;
}

ordered_json ref_json(const char* kind, const InstanceRef& r) {
    return ordered_json{{"record", kind}, {"n", r.n}, {"k", r.k}};
}

ordered_json summary_record_json(const RangeSummary& s) {
    ordered_json j;
    j["record"] = "summary";
    j["n_min"] = s.n_min;
    j["n_max"] = s.n_max;
    j["n_count"] = s.n_count;
    j["instances_evaluated"] = s.instances_evaluated;
    j["vacuous_count"] = s.vacuous_count;
    j["strict_count"] = s.strict_count;
    j["equal_count"] = s.equal_count;
    j["counterexample_count"] = s.counterexamples.size();
    j["anomaly_count"] = s.anomalies.size();
    j["max_first_witness"] = extreme_json(s.max_first_witness);
    j["max_witness_ratio"] = extreme_json(s.max_witness_ratio);
    j["witness_index_sum"] = s.witness_index_sum;
    auto hist = ordered_json::array();
    for (const auto& [bucket, count] : s.witness_index_histogram) hist.push_back(ordered_json::array({bucket, count}));
    j["witness_index_histogram"] = hist;
    j["record_count"] = record_count(s);
    return j;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    return row;
}

std::vector<std::string> csv_edge_cells(const EdgeCaseRecord& e) {
    std::vector<std::string> cells(kCsvColumns);
    cells[0] = "equality_case";
    cells[1] = std::to_string(e.n);
    cells[2] = std::to_string(e.k);
    cells[3] = std::to_string(e.pk);
    cells[4] = family_name(e.family);
    cells[5] = e.r ? std::to_string(*e.r) : "";
    cells[6] = join(e.factors, ';');
    return cells;
}

std::vector<std::string> csv_ref_cells(const char* kind, const InstanceRef& r) {
    std::vector<std::string> cells(kCsvColumns);
    cells[0] = kind;
    cells[1] = std::to_string(r.n);
    cells[2] = std::to_string(r.k);
    return cells;
}

std::vector<std::string> csv_summary_cells(const RangeSummary& s) {
    std::vector<std::string> cells(kCsvColumns);
    cells[0] = "summary";
    cells[7] = std::to_string(s.n_min);
    cells[8] = std::to_string(s.n_max);
    cells[9] = std::to_string(s.n_count);
    cells[10] = std::to_string(s.instances_evaluated);
    cells[11] = std::to_string(s.vacuous_count);
    cells[12] = std::to_string(s.strict_count);
    cells[13] = std::to_string(s.equal_count);
    cells[14] = std::to_string(s.counterexamples.size());
    cells[15] = std::to_string(s.anomalies.size());
    if (s.max_first_witness) {
        cells[16] = std::to_string(s.max_first_witness->index);
        cells[17] = std::to_string(s.max_first_witness->n);
        cells[18] = std::to_string(s.max_first_witness->k);
    }
    if (s.max_witness_ratio) {
        cells[19] = std::to_string(s.max_witness_ratio->index);
        cells[20] = std::to_string(s.max_witness_ratio->n);
        cells[21] = std::to_string(s.max_witness_ratio->k);
    }
    cells[22] = std::to_string(s.witness_index_sum);
    std::string hist;
    for (const auto& [bucket, count] : s.witness_index_histogram) {
        if (!hist.empty()) hist += ';';
        hist += std::to_string(bucket) + ":" + std::to_string(count);
    }
    cells[23] = hist;
    cells[24] = std::to_string(record_count(s));
    return cells;
}

// Checks the trailer against the records that preceded it.
void finish_parse(RangeSummary& s, bool saw_summary, std::size_t records, std::uint64_t declared,
                  std::uint64_t declared_cx, std::uint64_t declared_anom) {
    if (!saw_summary) throw FormatMismatch("record stream has no summary record (truncated or partial output)");
    if (declared != records) {
        throw FormatMismatch("record stream declares " + std::to_string(declared) + " records but holds " +
                             std::to_string(records));
    }
    if (declared_cx != s.counterexamples.size() || declared_anom != s.anomalies.size() ||
        s.equal_count != s.equality_cases.size()) {
        throw FormatMismatch("record stream counts disagree with its summary record");
    }
}

}  // namespace

std::string format_name(RecordFormat format) {
    return format == RecordFormat::Csv ? "csv" : "ndjson";
}

RecordFormat parse_format(const std::string& name) {
    if (name == "ndjson") return RecordFormat::Ndjson;
    if (name == "csv") return RecordFormat::Csv;
    throw ConfigError("unknown output format '" + name + "' (expected ndjson or csv)");
}

std::size_t emit_records(const RangeSummary& summary, RecordFormat format, std::ostream& out) {
    RangeSummary s = summary;
    s.canonicalize();
    std::size_t count = 0;
    if (format == RecordFormat::Ndjson) {
        for (const auto& e : s.equality_cases) out << equality_json(e).dump() << '\n', ++count;
        for (const auto& a : s.anomalies) out << ref_json("anomaly", a).dump() << '\n', ++count;
        for (const auto& c : s.counterexamples) out << ref_json("counterexample", c).dump() << '\n', ++count;
        out << summary_record_json(s).dump() << '\n';
    } else {
        out << kCsvHeader << '\n';
        for (const auto& e : s.equality_cases) out << csv_row(csv_edge_cells(e)) << '\n', ++count;
        for (const auto& a : s.anomalies) out << csv_row(csv_ref_cells("anomaly", a)) << '\n', ++count;
        for (const auto& c : s.counterexamples) out << csv_row(csv_ref_cells("counterexample", c)) << '\n', ++count;
        out << csv_row(csv_summary_cells(s)) << '\n';
    }
    ++count;
    out.flush();
    if (!out) throw IoError("record stream failed after " + std::to_string(count) + " records; output is partial");
    return count;
}

std::size_t emit_records(const RangeSummary& summary, RecordFormat format, const std::filesystem::path& path) {
    auto partial = path;
    partial += ".partial";
    std::size_t count = 0;
    {
        std::ofstream out(partial, std::ios::trunc);
        if (!out) throw IoError("cannot open " + partial.string() + " for writing");
        count = emit_records(summary, format, out);
    }
    std::error_code ec;
    std::filesystem::rename(partial, path, ec);
    if (ec) throw IoError("records left in " + partial.string() + ": cannot rename to " + path.string());
    return count;
}

std::size_t emit_edge_cases(const std::vector<EdgeCaseRecord>& records, RecordFormat format, std::ostream& out) {
    if (format == RecordFormat::Csv) out << kCsvHeader << '\n';
    for (const auto& e : records) {
        if (format == RecordFormat::Ndjson) {
            out << equality_json(e).dump() << '\n';
        } else {
            out << csv_row(csv_edge_cells(e)) << '\n';
        }
    }
    out.flush();
    if (!out) throw IoError("edge-case stream failed; output is partial");
    return records.size();
}

RangeSummary parse_records(std::istream& in, RecordFormat format) {
    RangeSummary s;
    bool saw_summary = false;
    std::size_t records = 0;
    std::uint64_t declared = 0, declared_cx = 0, declared_anom = 0;
    std::string line;

    if (format == RecordFormat::Ndjson) {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (saw_summary) throw FormatMismatch("record after the summary record");
            ordered_json j;
            try {
                j = ordered_json::parse(line);
                ++records;
                const auto kind = j.at("record").get<std::string>();
                if (kind == "equality_case") {
                    s.equality_cases.push_back(edge_case_from_json(j));
                } else if (kind == "anomaly") {
                    s.anomalies.push_back({j.at("n").get<std::uint64_t>(), j.at("k").get<std::size_t>()});
                } else if (kind == "counterexample") {
                    s.counterexamples.push_back({j.at("n").get<std::uint64_t>(), j.at("k").get<std::size_t>()});
                } else if (kind == "summary") {
                    saw_summary = true;
                    s.n_min = j.at("n_min").get<std::uint64_t>();
                    s.n_max = j.at("n_max").get<std::uint64_t>();
                    s.n_count = j.at("n_count").get<std::uint64_t>();
                    s.instances_evaluated = j.at("instances_evaluated").get<std::uint64_t>();
                    s.vacuous_count = j.at("vacuous_count").get<std::uint64_t>();
                    s.strict_count = j.at("strict_count").get<std::uint64_t>();
                    s.equal_count = j.at("equal_count").get<std::uint64_t>();
                    declared_cx = j.at("counterexample_count").get<std::uint64_t>();
                    declared_anom = j.at("anomaly_count").get<std::uint64_t>();
                    s.max_first_witness = extreme_from(j.at("max_first_witness"));
                    s.max_witness_ratio = extreme_from(j.at("max_witness_ratio"));
                    s.witness_index_sum = j.at("witness_index_sum").get<std::uint64_t>();
                    for (const auto& pair : j.at("witness_index_histogram")) {
                        s.witness_index_histogram[pair.at(0).get<std::size_t>()] = pair.at(1).get<std::uint64_t>();
                    }
                    declared = j.at("record_count").get<std::uint64_t>();
                } else {
                    throw FormatMismatch("unknown record type '" + kind + "'");
                }
            } catch (const nlohmann::json::exception& e) {
                throw FormatMismatch(std::string("malformed NDJSON record: ") + e.what());
            }
        }
    } else {
        if (!std::getline(in, line) || line != kCsvHeader) throw FormatMismatch("CSV header row missing or different");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (saw_summary) throw FormatMismatch("record after the summary record");
            const auto c = split(line, ',');
            if (c.size() != kCsvColumns) throw FormatMismatch("CSV row has " + std::to_string(c.size()) + " columns");
            ++records;
            if (c[0] == "equality_case") {
                EdgeCaseRecord e;
                e.n = to_u64(c[1], "n");
                e.k = to_u64(c[2], "k");
                e.pk = static_cast<std::uint32_t>(to_u64(c[3], "pk"));
                const auto family = parse_family(c[4]);
                if (!family) throw FormatMismatch("unknown equality family '" + c[4] + "'");
                e.family = *family;
                if (!c[5].empty()) e.r = static_cast<unsigned>(to_u64(c[5], "r"));
                if (!c[6].empty()) {
                    for (const auto& f : split(c[6], ';')) e.factors.push_back(static_cast<std::uint32_t>(to_u64(f, "factors")));
                }
                s.equality_cases.push_back(std::move(e));
            } else if (c[0] == "anomaly") {
                s.anomalies.push_back({to_u64(c[1], "n"), to_u64(c[2], "k")});
            } else if (c[0] == "counterexample") {
                s.counterexamples.push_back({to_u64(c[1], "n"), to_u64(c[2], "k")});
            } else if (c[0] == "summary") {
                saw_summary = true;
                s.n_min = to_u64(c[7], "n_min");
                s.n_max = to_u64(c[8], "n_max");
                s.n_count = to_u64(c[9], "n_count");
                s.instances_evaluated = to_u64(c[10], "instances_evaluated");
                s.vacuous_count = to_u64(c[11], "vacuous_count");
                s.strict_count = to_u64(c[12], "strict_count");
                s.equal_count = to_u64(c[13], "equal_count");
                declared_cx = to_u64(c[14], "counterexample_count");
                declared_anom = to_u64(c[15], "anomaly_count");
                if (!c[16].empty()) {
                    s.max_first_witness = WitnessExtreme{to_u64(c[16], "max_first_witness_index"),
                                                         to_u64(c[17], "max_first_witness_n"),
                                                         to_u64(c[18], "max_first_witness_k")};
                }
                if (!c[19].empty()) {
                    s.max_witness_ratio = WitnessExtreme{to_u64(c[19], "max_ratio_index"), to_u64(c[20], "max_ratio_n"),
                                                         to_u64(c[21], "max_ratio_k")};
                }
                s.witness_index_sum = to_u64(c[22], "witness_index_sum");
                if (!c[23].empty()) {
                    for (const auto& entry : split(c[23], ';')) {
                        const auto colon = entry.find(':');
                        if (colon == std::string::npos) throw FormatMismatch("bad histogram entry '" + entry + "'");
                        s.witness_index_histogram[to_u64(entry.substr(0, colon), "histogram")] =
                            to_u64(entry.substr(colon + 1), "histogram");
                    }
                }
                declared = to_u64(c[24], "record_count");
            } else {
                throw FormatMismatch("unknown record type '" + c[0] + "'");
            }
        }
    }
    finish_parse(s, saw_summary, records, declared, declared_cx, declared_anom);
    s.canonicalize();
    return s;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

std::string summary_digest(const RangeSummary& summary) {
    std::ostringstream out;
    emit_records(summary, RecordFormat::Ndjson, out);
    return sha256_hex(out.str());
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
    const std::time_t seconds = std::chrono::system_clock::to_time_t(t);
    std::tm utc{};
    gmtime_r(&seconds, &utc);
    std::ostringstream out;
    out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

RunManifest make_manifest(const RangeJob& job, const RangeSummary& summary,
                          std::chrono::system_clock::time_point started,
                          std::chrono::system_clock::time_point finished) {
    RunManifest m;
    m.tool_version = GOLDCHECK_VERSION;
    m.table_limit = job.table_limit;
    m.job = job;
    m.started_at = iso8601_utc(started);
    m.finished_at = iso8601_utc(finished);
    m.elapsed = summary.elapsed;
    m.throughput = summary.throughput();
    m.summary_digest = summary_digest(summary);
    return m;
}

ordered_json manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["tool"] = "goldcheck";
    j["tool_version"] = m.tool_version;
    j["table_limit"] = m.table_limit;
    j["job"] = ordered_json{{"n_min", m.job.n_min},
                            {"n_max", m.job.n_max},
                            {"table_limit", m.job.table_limit},
                            {"worker_count", m.job.worker_count},
                            {"checkpoint_interval", m.job.checkpoint_interval},
                            {"block_evens", m.job.block_evens},
                            {"fail_fast", m.job.fail_fast}};
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    j["elapsed_ns"] = static_cast<std::int64_t>(m.elapsed.count());
    j["throughput_n_per_s"] = m.throughput;
    j["digest_algorithm"] = "sha256/ndjson-records";
    j["summary_digest"] = m.summary_digest;
    return j;
}

RunManifest manifest_from_json(const ordered_json& j) {
    RunManifest m;
    try {
        m.tool_version = j.at("tool_version").get<std::string>();
        m.table_limit = j.at("table_limit").get<std::uint64_t>();
        const auto& job = j.at("job");
        m.job.n_min = job.at("n_min").get<std::uint64_t>();
        m.job.n_max = job.at("n_max").get<std::uint64_t>();
        m.job.table_limit = job.at("table_limit").get<std::uint64_t>();
        m.job.worker_count = job.at("worker_count").get<int>();
        m.job.checkpoint_interval = job.at("checkpoint_interval").get<std::uint64_t>();
        m.job.block_evens = job.at("block_evens").get<std::uint64_t>();
        m.job.fail_fast = job.at("fail_fast").get<bool>();
        m.started_at = j.at("started_at").get<std::string>();
        m.finished_at = j.at("finished_at").get<std::string>();
        m.elapsed = std::chrono::nanoseconds(j.at("elapsed_ns").get<std::int64_t>());
        m.throughput = j.at("throughput_n_per_s").get<double>();
        m.summary_digest = j.at("summary_digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatMismatch(std::string("malformed run manifest: ") + e.what());
    }
    return m;
}

bool manifest_matches_records(const RunManifest& manifest, std::istream& records, RecordFormat format) {
    return summary_digest(parse_records(records, format)) == manifest.summary_digest;
}

void render_proof_trace(const LemmaTrace& t, std::ostream& out) {
    const auto n = t.instance.n();
    const auto k = t.instance.k();
    const std::uint64_t pk = t.instance.pk();
    out << "Lemma trace for n = " << n << ", k = " << k << ", p_k = p_" << k << " = " << pk << "\n";
    out << "  hypothesis: n - p_i composite for every i = 1.." << k << "\n";
    if (!t.used_bertrand) {
        out << "  n - p_" << t.i << " = " << t.value << " has prime factor q = " << t.produced_prime << "\n";
        out << "  q = " << t.produced_prime << " > " << pk << ", take p = q\n";
    } else {
        const std::uint64_t m = t.m.value_or(0);
        out << "  largest prime factor over i <= k equals p_k, attained at i = " << t.i << "\n";
        out << "  n - p_" << t.i << " = " << t.value << " = " << m << "·" << pk << ", m = " << m
            << " ≥ 3, m odd\n";
        out << "  3·" << pk << " = " << 3 * pk << " ≤ " << t.value << " < " << n << "\n";
        out << "  p_" << k + 1 << " = " << t.produced_prime << " < 2·" << pk << " = " << 2 * pk << " (Bertrand)\n";
        out << "  " << t.produced_prime << " < " << n << ", take p = p_" << k + 1 << "\n";
    }
    out << "  result: " << pk << " < " << t.produced_prime << " < " << n << ", " << t.produced_prime << " prime\n";
}

void render_descent_trace(const DescentTrace& t, std::ostream& out) {
    out << "Goldbach decomposition: " << t.n << " = " << t.p << " + " << t.q << "\n";
    out << "  K(n) = " << t.max_k << " (number of odd primes below " << t.n << ")\n";
    out << "  minimal index i = " << t.i << ": p_" << t.i << " = " << t.p << ", n - p_" << t.i << " = " << t.q
        << " prime\n";
    if (t.i == 1) {
        out << "  descent: (n, 1) is already vacuous\n";
        return;
    }
    if (t.steps.empty()) {
        out << "  descent: not verified (fast mode)\n";
        return;
    }
    out << "  descent through nonvacuous k = 1.." << t.i - 1 << ":\n";
    for (const auto& step : t.steps) {
        out << "    k = " << step.k << ", p_k = " << step.pk << ": lemma gives prime " << step.produced_prime << " in ("
            << step.pk << ", " << t.n << ")" << (step.used_bertrand ? " via Bertrand" : " directly") << ", so p_"
            << step.k + 1 << " < " << t.n << "\n";
    }
    out << "    k = " << t.i << ": vacuous, n - p_" << t.i << " = " << t.q << " prime\n";
}

}  // namespace goldcheck
