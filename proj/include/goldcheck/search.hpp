#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>

#include "goldcheck/sieve.hpp"
#include "goldcheck/summary.hpp"

namespace goldcheck {

struct RangeJob {
    std::uint64_t n_min = 6;
    std::uint64_t n_max = 6;
    std::uint64_t table_limit = 6;
    int worker_count = 1;
    // Even values of n between checkpoints; rounded up to whole blocks.
    std::uint64_t checkpoint_interval = 1'000'000;
    // Even values of n per work block.
    std::uint64_t block_evens = 10'000;
    // Stop at the first checkpoint boundary after a counterexample or anomaly.
    bool fail_fast = false;

    // Throws ConfigError naming the offending field.
    void validate() const;

    std::uint64_t block_count() const;
    std::uint64_t block_first(std::uint64_t block) const;
    std::uint64_t block_last(std::uint64_t block) const;
    // Block holding the even value n.
    std::uint64_t block_of(std::uint64_t n) const;
};

struct RunOptions {
    // Empty: no checkpointing.
    std::filesystem::path checkpoint;
    // Continue from an existing checkpoint at `checkpoint` instead of starting over.
    bool resume = false;
    // Polled at every checkpoint boundary; returning true saves state and stops.
    std::function<bool(std::uint64_t blocks_done)> stop_requested;
};

enum class RunStatus { Complete, Interrupted, HaltedFailFast };

struct RangeRun {
    RangeSummary summary;
    RunStatus status = RunStatus::Complete;
    std::uint64_t blocks_done = 0;
    std::uint64_t blocks_total = 0;
    // First n not yet covered; n_max + 2 when complete.
    std::uint64_t next_n = 0;
    // Blocks actually evaluated by this invocation (0 when resuming a finished job).
    std::uint64_t blocks_evaluated = 0;
};

// Scans every even n in [lo, hi] on the calling thread. The hot kernel shared by
// the parallel driver: per n it walks i = 1.. until n - p_i is prime, keeping a
// running maximum of largest prime factors and a monotone first-witness pointer.
RangeSummary scan_block(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi);

// OpenMP-parallel over blocks; deterministic for any worker count.
RangeRun run_range(const PrimeTable& table, const RangeJob& job, const RunOptions& options = {});

RangeSummary verify_range(const PrimeTable& table, const RangeJob& job);

// Serial reference: evaluates each (n, k) independently through evaluate_instance,
// first_witness_index and classify_equality, stopping at the first vacuous k.
RangeSummary verify_range_reference(const PrimeTable& table, std::uint64_t n_min, std::uint64_t n_max);

// All equality cases with 6 <= n <= n_max, sorted by (n, k).
std::vector<EdgeCaseRecord> enumerate_edge_cases(const PrimeTable& table, std::uint64_t n_max, int workers = 0);

struct WitnessStatistics {
    std::uint64_t witnessed_instances = 0;
    std::uint64_t index_sum = 0;
    std::map<std::size_t, std::uint64_t> histogram;
    std::optional<WitnessExtreme> max_index;
    std::optional<WitnessExtreme> max_ratio;

    double mean_index() const;
    friend bool operator==(const WitnessStatistics&, const WitnessStatistics&) = default;
};

WitnessStatistics witness_statistics(const RangeSummary& summary);
WitnessStatistics witness_statistics(const PrimeTable& table, std::uint64_t n_max, int workers = 0);

int default_worker_count();

}  // namespace goldcheck
