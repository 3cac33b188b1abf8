// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "goldcheck/search.hpp"
#include "goldcheck/sieve.hpp"

namespace {

void BM_SieveReference(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(goldcheck::build_table_reference(static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(BM_SieveReference)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_SieveSegmented(benchmark::State& state) {
    goldcheck::SieveOptions options;
    options.threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(goldcheck::build_table(static_cast<std::uint64_t>(state.range(0)), options));
    }
}
BENCHMARK(BM_SieveSegmented)
    ->Args({1'000'000, 1})
    ->Args({10'000'000, 1})
    ->Args({10'000'000, 4})
    ->Unit(benchmark::kMillisecond);

const goldcheck::PrimeTable& shared_table() {
    static const auto table = goldcheck::build_table(2'000'000);
    return table;
}

void BM_VerifyReference(benchmark::State& state) {
    const auto& table = shared_table();
    for (auto _ : state) {
        benchmark::DoNotOptimize(goldcheck::verify_range_reference(table, 6, static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(BM_VerifyReference)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_VerifyParallel(benchmark::State& state) {
    const auto& table = shared_table();
    goldcheck::RangeJob job;
    job.n_max = static_cast<std::uint64_t>(state.range(0));
    job.table_limit = table.limit();
    job.worker_count = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(goldcheck::verify_range(table, job));
    }
}
BENCHMARK(BM_VerifyParallel)
    ->Args({100'000, 1})
    ->Args({2'000'000, 1})
    ->Args({2'000'000, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
