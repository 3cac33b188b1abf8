#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "goldcheck/errors.hpp"
#include "goldcheck/report.hpp"

using namespace goldcheck;

namespace {

const PrimeTable& table() {
    static const auto t = build_table(100'000);
    return t;
}

RangeSummary summary_for(std::uint64_t lo, std::uint64_t hi) {
    RangeJob job;
    job.n_min = lo;
    job.n_max = hi;
    job.table_limit = table().limit();
    job.block_evens = 1'000;
    return verify_range(table(), job);
}

std::string emit(const RangeSummary& s, RecordFormat format, std::size_t* count = nullptr) {
    std::ostringstream out;
    const auto n = emit_records(s, format, out);
    if (count) *count = n;
    return out.str();
}

RangeSummary round_trip(const RangeSummary& s, RecordFormat format) {
    std::istringstream in(emit(s, format));
    return parse_records(in, format);
}

// Counterexamples and anomalies never occur in practice, so build some by hand.
RangeSummary with_findings() {
    auto s = summary_for(6, 1'000);
    s.counterexamples = {{500, 3}, {200, 7}};
    s.anomalies = {{4, 1}};
    s.instances_evaluated += 3;
    s.canonicalize();
    return s;
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::string render(std::uint64_t n, std::size_t k) {
    const auto inst = Instance::make(table(), n, k);
    std::ostringstream out;
    render_proof_trace(construct_lemma_prime(table(), inst, evaluate_instance(table(), inst)), out);
    return out.str();
}

void expect_contains(const std::string& haystack, const std::string& needle) {
    EXPECT_NE(haystack.find(needle), std::string::npos) << "missing \"" << needle << "\" in\n" << haystack;
}

}  // namespace

TEST(Records, UpToHundredHasFiveRecords) {
    std::size_t count = 0;
    const auto text = emit(summary_for(6, 100), RecordFormat::Ndjson, &count);
    EXPECT_EQ(count, 5u);
    EXPECT_EQ(count_lines(text), 5u);
    EXPECT_EQ(text.rfind("{\"record\":\"summary\"", 0), std::string::npos);
    const auto last = text.substr(text.rfind('\n', text.size() - 2) + 1);
    expect_contains(last, "\"record\":\"summary\"");
    expect_contains(last, "\"record_count\":5");

    const auto csv = emit(summary_for(6, 100), RecordFormat::Csv, &count);
    EXPECT_EQ(count, 5u);
    EXPECT_EQ(count_lines(csv), 6u);  // header plus records
    EXPECT_EQ(csv.rfind("record,n,k,", 0), 0u);
}

TEST(Records, EmptySummaryIsJustTheTrailer) {
    std::size_t count = 0;
    emit(RangeSummary{}, RecordFormat::Ndjson, &count);
    EXPECT_EQ(count, 1u);
    EXPECT_EQ(round_trip(RangeSummary{}, RecordFormat::Ndjson), RangeSummary{});
    EXPECT_EQ(round_trip(RangeSummary{}, RecordFormat::Csv), RangeSummary{});
}

TEST(Records, RoundTripBothFormats) {
    for (const auto& s : {summary_for(6, 100), summary_for(6, 100'000), with_findings()}) {
        EXPECT_EQ(round_trip(s, RecordFormat::Ndjson), s);
        EXPECT_EQ(round_trip(s, RecordFormat::Csv), s);
        EXPECT_EQ(emit(round_trip(s, RecordFormat::Csv), RecordFormat::Ndjson), emit(s, RecordFormat::Ndjson));
    }
    const auto findings = with_findings();
    const auto text = emit(findings, RecordFormat::Ndjson);
    expect_contains(text, "{\"record\":\"anomaly\",\"n\":4,\"k\":1}");
    expect_contains(text, "{\"record\":\"counterexample\",\"n\":200,\"k\":7}");
    EXPECT_LT(text.find("counterexample"), text.find("\"record\":\"summary\""));
    EXPECT_LT(text.find("anomaly"), text.find("counterexample"));
}

TEST(Records, ByteIdenticalAcrossRunsAndWorkers) {
    const auto a = emit(summary_for(6, 100'000), RecordFormat::Ndjson);
    RangeJob job;
    job.n_min = 6;
    job.n_max = 100'000;
    job.table_limit = table().limit();
    job.worker_count = 4;
    job.block_evens = 333;
    const auto b = emit(verify_range(table(), job), RecordFormat::Ndjson);
    EXPECT_EQ(a, b);
    EXPECT_EQ(summary_digest(summary_for(6, 100'000)), sha256_hex(a));
}

TEST(Records, TruncatedOrTamperedStreamsAreRejected) {
    for (auto format : {RecordFormat::Ndjson, RecordFormat::Csv}) {
        const auto text = emit(summary_for(6, 100), format);
        const auto cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
        std::istringstream truncated(cut);
        EXPECT_THROW(parse_records(truncated, format), FormatMismatch) << format_name(format);

        // Dropping an equality record leaves record_count disagreeing with the stream.
        const auto first_record = format == RecordFormat::Csv ? text.find('\n') + 1 : 0;
        const auto dropped = text.substr(0, first_record) + text.substr(text.find('\n', first_record) + 1);
        std::istringstream missing(dropped);
        EXPECT_THROW(parse_records(missing, format), FormatMismatch) << format_name(format);
    }
    std::istringstream garbage("hello\n");
    EXPECT_THROW(parse_records(garbage, RecordFormat::Ndjson), FormatMismatch);
}

TEST(Records, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Records, FileOutputUsesPartialName) {
    const auto dir = std::filesystem::temp_directory_path() / ("goldcheck_report_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto path = dir / "records.ndjson";
    const auto s = summary_for(6, 1'000);
    EXPECT_EQ(emit_records(s, RecordFormat::Ndjson, path), s.equality_cases.size() + 1);
    EXPECT_TRUE(std::filesystem::exists(path));
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".partial"));
    std::ifstream in(path);
    EXPECT_EQ(parse_records(in, RecordFormat::Ndjson), s);

    EXPECT_THROW(emit_records(s, RecordFormat::Ndjson, dir / "missing" / "x.ndjson"), IoError);
    std::filesystem::remove_all(dir);
}

TEST(Manifest, DigestMatchesRecords) {
    RangeJob job;
    job.n_min = 6;
    job.n_max = 10'000;
    job.table_limit = table().limit();
    const auto s = verify_range(table(), job);
    const auto now = std::chrono::system_clock::now();
    const auto manifest = make_manifest(job, s, now - std::chrono::seconds(2), now);
    EXPECT_EQ(manifest.summary_digest, summary_digest(s));
    EXPECT_EQ(manifest.elapsed, s.elapsed);
    EXPECT_NE(manifest.started_at, manifest.finished_at);
    EXPECT_EQ(manifest.tool_version, GOLDCHECK_VERSION);

    const auto back = manifest_from_json(manifest_to_json(manifest));
    EXPECT_EQ(manifest_to_json(back), manifest_to_json(manifest));

    std::istringstream ndjson(emit(s, RecordFormat::Ndjson));
    EXPECT_TRUE(manifest_matches_records(manifest, ndjson, RecordFormat::Ndjson));
    std::istringstream csv(emit(s, RecordFormat::Csv));
    EXPECT_TRUE(manifest_matches_records(manifest, csv, RecordFormat::Csv));
    std::istringstream other(emit(summary_for(6, 100), RecordFormat::Ndjson));
    EXPECT_FALSE(manifest_matches_records(manifest, other, RecordFormat::Ndjson));
}

TEST(Manifest, TimestampFormat) {
    EXPECT_EQ(iso8601_utc(std::chrono::system_clock::time_point{}), "1970-01-01T00:00:00Z");
}

TEST(ProofTrace, EqualityBranchForThirtyTwo) {
    const auto text = render(30, 2);
    expect_contains(text, "n - p_2 = 25 = 5·5, m = 5 ≥ 3, m odd");
    expect_contains(text, "3·5 = 15 ≤ 25 < 30");
    expect_contains(text, "p_3 = 7 < 2·5 = 10 (Bertrand)");
    expect_contains(text, "7 < 30");
}

TEST(ProofTrace, StrictBranch) {
    const auto text = render(98, 6);
    expect_contains(text, "q = 19 > 17, take p = q");
    EXPECT_EQ(text.find("Bertrand"), std::string::npos);
}

TEST(ProofTrace, SmallestEqualityCase) {
    const auto text = render(12, 1);
    expect_contains(text, "9 = 3·3, m = 3 ≥ 3");
    expect_contains(text, "p_2 = 5 < 2·3 = 6");
    expect_contains(text, "5 < 12");
}

TEST(ProofTrace, Descent) {
    std::ostringstream out;
    render_descent_trace(goldbach_decompose(table(), 30, DescentMode::Verify), out);
    expect_contains(out.str(), "30 = 7 + 23");
    expect_contains(out.str(), "K(n) = 9");
    expect_contains(out.str(), "k = 3: vacuous");
}

TEST(RecordsProperty, RandomSummariesRoundTrip) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::uint64_t> half(3, 20'000);
        std::uint64_t a = 2 * half(rng), b = 2 * half(rng);
        if (a > b) std::swap(a, b);
        auto s = summary_for(a, b);
        if (trial % 3 == 0) {
            s.counterexamples.push_back({b, static_cast<std::size_t>(1 + trial)});
            s.anomalies.push_back({a, 2});
            s.instances_evaluated += 2;
            s.canonicalize();
        }
        for (auto format : {RecordFormat::Ndjson, RecordFormat::Csv}) ASSERT_EQ(round_trip(s, format), s);
    }
}
