#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "goldcheck/conjecture.hpp"

namespace goldcheck {

struct InstanceRef {
    std::uint64_t n = 0;
    std::size_t k = 0;
    friend auto operator<=>(const InstanceRef&, const InstanceRef&) = default;
};

// First-witness index attained at (n, k).
struct WitnessExtreme {
    std::size_t index = 0;
    std::uint64_t n = 0;
    std::size_t k = 0;
    friend bool operator==(const WitnessExtreme&, const WitnessExtreme&) = default;
};

// Exact buckets for indices 1..64, then [65,128], [129,256], ... keyed by lower bound.
inline std::size_t histogram_bucket(std::size_t index) {
    if (index <= 64) return index;
    std::size_t lower = 64;
    while (lower * 2 < index) lower *= 2;
    return lower + 1;
}

// Larger index wins; ties go to the smaller (n, k) so merging is order-insensitive.
inline bool beats_by_index(const WitnessExtreme& a, const WitnessExtreme& b) {
    if (a.index != b.index) return a.index > b.index;
    return InstanceRef{a.n, a.k} < InstanceRef{b.n, b.k};
}

// Same rule on the ratio index / k, compared exactly by cross-multiplication.
inline bool beats_by_ratio(const WitnessExtreme& a, const WitnessExtreme& b) {
    const auto lhs = static_cast<unsigned __int128>(a.index) * b.k;
    const auto rhs = static_cast<unsigned __int128>(b.index) * a.k;
    if (lhs != rhs) return lhs > rhs;
    return InstanceRef{a.n, a.k} < InstanceRef{b.n, b.k};
}

struct RangeSummary {
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    // Even values of n scanned; 0 marks the empty summary (identity for merge).
    std::uint64_t n_count = 0;

    std::uint64_t instances_evaluated = 0;
    std::uint64_t vacuous_count = 0;
    std::uint64_t strict_count = 0;
    std::uint64_t equal_count = 0;
    std::vector<InstanceRef> counterexamples;
    std::vector<InstanceRef> anomalies;

    std::optional<WitnessExtreme> max_first_witness;
    std::optional<WitnessExtreme> max_witness_ratio;
    std::uint64_t witness_index_sum = 0;
    std::map<std::size_t, std::uint64_t> witness_index_histogram;

    std::vector<EdgeCaseRecord> equality_cases;

    // Wall time spent producing the summary. Not part of the result: excluded
    // from equality, serialised records and the digest.
    std::chrono::nanoseconds elapsed{0};

    double throughput() const;

    // Adds one witnessed instance to the index statistics.
    void record_witness(std::size_t first_index, std::uint64_t n, std::size_t k);

    // Folds `other` (a disjoint range) into this summary. Associative and commutative.
    void merge(const RangeSummary& other);

    // Sorts record lists by (n, k).
    void canonicalize();

    bool consistent() const;

    friend bool operator==(const RangeSummary& a, const RangeSummary& b);
};

RangeSummary merged(RangeSummary a, const RangeSummary& b);

// Full lossless JSON form (used by checkpoints). Field order is canonical.
nlohmann::ordered_json summary_to_json(const RangeSummary& summary);
RangeSummary summary_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json edge_case_to_json(const EdgeCaseRecord& record);
EdgeCaseRecord edge_case_from_json(const nlohmann::ordered_json& j);

}  // namespace goldcheck
