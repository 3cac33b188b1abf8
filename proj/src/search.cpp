#include "goldcheck/search.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include <omp.h>

#include "goldcheck/checkpoint.hpp"
#include "goldcheck/errors.hpp"

namespace goldcheck {

namespace {

std::uint32_t lpf_unchecked(const PrimeTable& table, std::uint64_t x) {
    std::uint32_t p = 0;
    while (x > 1) {
        p = table.spf_unchecked(x);
        x /= p;
    }
    return p;
}

void require_table(const PrimeTable& table, std::uint64_t n_max) {
    if (n_max > table.limit()) {
        throw CoverageError("range end " + std::to_string(n_max) + " exceeds table limit " + std::to_string(table.limit()));
    }
}

RangeJob full_job(const PrimeTable& table, std::uint64_t n_max, int workers) {
    RangeJob job;
    job.n_min = 6;
    job.n_max = n_max;
    job.table_limit = table.limit();
    job.worker_count = workers > 0 ? workers : default_worker_count();
    job.checkpoint_interval = std::max<std::uint64_t>(1, (n_max - 6) / 2 + 1);
    return job;
}

}  // namespace

int default_worker_count() {
    return std::max(1, omp_get_max_threads());
}

void RangeJob::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid range job: " + what); };
    if (n_min % 2 != 0) fail("n_min = " + std::to_string(n_min) + " is odd");
    if (n_max % 2 != 0) fail("n_max = " + std::to_string(n_max) + " is odd");
    if (n_min < 6) fail("n_min = " + std::to_string(n_min) + " is below 6");
    if (n_min > n_max) fail("n_min = " + std::to_string(n_min) + " exceeds n_max = " + std::to_string(n_max));
    if (n_max > table_limit) {
        fail("n_max = " + std::to_string(n_max) + " exceeds table_limit = " + std::to_string(table_limit));
    }
    if (worker_count < 1) fail("worker_count = " + std::to_string(worker_count) + " must be at least 1");
    if (block_evens == 0) fail("block size must be positive");
    if (checkpoint_interval == 0) fail("checkpoint interval must be positive");
}

std::uint64_t RangeJob::block_count() const {
    const std::uint64_t evens = (n_max - n_min) / 2 + 1;
    return (evens + block_evens - 1) / block_evens;
}

std::uint64_t RangeJob::block_first(std::uint64_t block) const {
    return n_min + 2 * block_evens * block;
}

std::uint64_t RangeJob::block_last(std::uint64_t block) const {
    return std::min(n_max, block_first(block) + 2 * (block_evens - 1));
}

std::uint64_t RangeJob::block_of(std::uint64_t n) const {
    return (n - n_min) / (2 * block_evens);
}

RangeSummary scan_block(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi) {
    RangeSummary s;
    if (lo > hi) return s;
    s.n_min = lo;
    s.n_max = hi;
    const auto primes = table.odd_primes();
    // lpf[idx] = largest prime factor of n - p_{idx+1}
    std::vector<std::uint32_t> lpf;
    lpf.reserve(256);

    for (std::uint64_t n = lo; n <= hi; n += 2) {
        ++s.n_count;
        lpf.clear();
        std::uint32_t running_max = 0;
        std::size_t first = 0;
        for (std::size_t idx = 0; idx < primes.size(); ++idx) {
            const std::uint32_t p = primes[idx];
            if (p >= n) break;
            const std::size_t k = idx + 1;
            const std::uint64_t v = n - p;
            ++s.instances_evaluated;
            if (v == 1) {
                s.anomalies.push_back({n, k});
                break;
            }
            if (table.is_prime_unchecked(v)) {
                // (n, k) is vacuous and so is every larger k.
                ++s.vacuous_count;
                break;
            }
            const std::uint32_t f = lpf_unchecked(table, v);
            lpf.push_back(f);
            running_max = std::max(running_max, f);

            // Indices whose factor falls below p_k stay below every later p_k.
            while (first <= idx && lpf[first] < p) ++first;

            if (running_max < p) {
                s.counterexamples.push_back({n, k});
                continue;
            }
            if (running_max == p) {
                ++s.equal_count;
                EdgeCaseRecord record;
                record.n = n;
                record.k = k;
                record.pk = p;
                record.factors.assign(lpf.begin(), lpf.end());
                record.family = equality_family(n, k, record.r);
                s.equality_cases.push_back(std::move(record));
            } else {
                ++s.strict_count;
            }
            s.record_witness(first + 1, n, k);
        }
    }
    return s;
}

RangeRun run_range(const PrimeTable& table, const RangeJob& job, const RunOptions& options) {
    job.validate();
    require_table(table, job.n_max);
    const auto started = std::chrono::steady_clock::now();

    CheckpointState state;
    if (options.resume && !options.checkpoint.empty() && std::filesystem::exists(options.checkpoint)) {
        state = load_checkpoint(options.checkpoint);
        check_resumable(state, job);
    } else {
        state = fresh_checkpoint(job);
    }

    std::vector<std::uint64_t> pending;
    for (std::uint64_t b = 0; b < state.completed.size(); ++b) {
        if (!state.completed[b]) pending.push_back(b);
    }
    const std::uint64_t wave_blocks =
        std::max<std::uint64_t>(1, (job.checkpoint_interval + job.block_evens - 1) / job.block_evens);

    RangeRun run;
    run.blocks_total = state.completed.size();
    const std::chrono::nanoseconds prior = state.partial.elapsed;

    auto finish = [&](RunStatus status) {
        state.partial.elapsed =
            prior + std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
        if (!options.checkpoint.empty()) save_checkpoint(options.checkpoint, state);
        run.summary = state.partial;
        run.status = status;
        run.blocks_done = state.blocks_done();
        run.next_n = state.next_n();
        return run;
    };

    for (std::size_t start = 0; start < pending.size(); start += wave_blocks) {
        const std::size_t end = std::min<std::size_t>(pending.size(), start + wave_blocks);
        std::vector<RangeSummary> results(end - start);

        // Each block fills its own slot; the merge below runs on this thread.
#pragma omp parallel for schedule(dynamic, 1) num_threads(job.worker_count)
        for (std::size_t w = start; w < end; ++w) {
            const auto b = pending[w];
            results[w - start] = scan_block(table, job.block_first(b), job.block_last(b));
        }

        for (std::size_t w = start; w < end; ++w) {
            state.partial.merge(results[w - start]);
            state.completed[pending[w]] = true;
        }
        run.blocks_evaluated += end - start;

        const bool last = end == pending.size();
        if (!last && !options.checkpoint.empty()) {
            state.partial.elapsed =
                prior + std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
            save_checkpoint(options.checkpoint, state);
        }
        if (job.fail_fast && (!state.partial.counterexamples.empty() || !state.partial.anomalies.empty())) {
            return finish(last ? RunStatus::Complete : RunStatus::HaltedFailFast);
        }
        if (!last && options.stop_requested && options.stop_requested(state.blocks_done())) {
            return finish(RunStatus::Interrupted);
        }
    }
    return finish(RunStatus::Complete);
}

RangeSummary verify_range(const PrimeTable& table, const RangeJob& job) {
    return run_range(table, job).summary;
}

RangeSummary verify_range_reference(const PrimeTable& table, std::uint64_t n_min, std::uint64_t n_max) {
    require_table(table, n_max);
    const auto started = std::chrono::steady_clock::now();
    RangeSummary s;
    for (std::uint64_t n = n_min; n <= n_max; n += 2) {
        if (s.n_count == 0) s.n_min = n;
        s.n_max = n;
        ++s.n_count;
        for (std::size_t k = 1; k <= table.odd_prime_count() && table.odd_prime(k) < n; ++k) {
            const auto inst = Instance::make(table, n, k);
            const auto result = evaluate_instance(table, inst);
            ++s.instances_evaluated;
            if (std::holds_alternative<outcome::Vacuous>(result)) {
                ++s.vacuous_count;
                break;
            }
            if (std::holds_alternative<outcome::AnomalyUnit>(result)) {
                s.anomalies.push_back({n, k});
                break;
            }
            if (std::holds_alternative<outcome::CounterexampleCandidate>(result)) {
                s.counterexamples.push_back({n, k});
                continue;
            }
            if (auto record = classify_equality(table, inst, result)) {
                ++s.equal_count;
                s.equality_cases.push_back(std::move(*record));
            } else {
                ++s.strict_count;
            }
            s.record_witness(*first_witness_index(table, inst), n, k);
        }
    }
    s.canonicalize();
    s.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started);
    return s;
}

std::vector<EdgeCaseRecord> enumerate_edge_cases(const PrimeTable& table, std::uint64_t n_max, int workers) {
    require_table(table, n_max);
    const std::uint64_t upper = n_max - n_max % 2;
    if (upper < 6) return {};
    return verify_range(table, full_job(table, upper, workers)).equality_cases;
}

double WitnessStatistics::mean_index() const {
    return witnessed_instances ? static_cast<double>(index_sum) / static_cast<double>(witnessed_instances) : 0.0;
}

WitnessStatistics witness_statistics(const RangeSummary& summary) {
    WitnessStatistics stats;
    stats.witnessed_instances = summary.strict_count + summary.equal_count;
    stats.index_sum = summary.witness_index_sum;
    stats.histogram = summary.witness_index_histogram;
    stats.max_index = summary.max_first_witness;
    stats.max_ratio = summary.max_witness_ratio;
    return stats;
}

WitnessStatistics witness_statistics(const PrimeTable& table, std::uint64_t n_max, int workers) {
    require_table(table, n_max);
    const std::uint64_t upper = n_max - n_max % 2;
    if (upper < 6) return {};
    return witness_statistics(verify_range(table, full_job(table, upper, workers)));
}

}  // namespace goldcheck
