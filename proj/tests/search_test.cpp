#include <gtest/gtest.h>

#include <random>

#include "goldcheck/errors.hpp"
#include "goldcheck/search.hpp"
#include "trial_division.hpp"

using namespace goldcheck;

namespace {

const PrimeTable& table_1e6() {
    static const auto table = build_table(1'000'000);
    return table;
}

RangeJob job_for(std::uint64_t lo, std::uint64_t hi, int workers = 1, std::uint64_t block = 10'000) {
    RangeJob job;
    job.n_min = lo;
    job.n_max = hi;
    job.table_limit = table_1e6().limit();
    job.worker_count = workers;
    job.block_evens = block;
    return job;
}

std::vector<InstanceRef> refs(const std::vector<EdgeCaseRecord>& records) {
    std::vector<InstanceRef> out;
    for (const auto& r : records) out.push_back({r.n, r.k});
    return out;
}

}  // namespace

TEST(HistogramBucket, ExactThenExponential) {
    EXPECT_EQ(histogram_bucket(1), 1u);
    EXPECT_EQ(histogram_bucket(64), 64u);
    EXPECT_EQ(histogram_bucket(65), 65u);
    EXPECT_EQ(histogram_bucket(128), 65u);
    EXPECT_EQ(histogram_bucket(129), 129u);
    EXPECT_EQ(histogram_bucket(256), 129u);
    EXPECT_EQ(histogram_bucket(257), 257u);
}

TEST(RangeJob, Validation) {
    EXPECT_THROW(job_for(7, 100).validate(), ConfigError);
    EXPECT_THROW(job_for(6, 101).validate(), ConfigError);
    EXPECT_THROW(job_for(4, 100).validate(), ConfigError);
    EXPECT_THROW(job_for(100, 6).validate(), ConfigError);
    EXPECT_THROW(job_for(6, 100, 0).validate(), ConfigError);
    EXPECT_THROW(job_for(6, 100, 1, 0).validate(), ConfigError);
    auto job = job_for(6, 100);
    job.table_limit = 50;
    EXPECT_THROW(job.validate(), ConfigError);
    const auto big = build_table(1000);
    auto over = job_for(6, 2000);
    EXPECT_THROW(verify_range(big, over), CoverageError);
}

TEST(RangeJob, BlockGeometry) {
    const auto job = job_for(6, 100, 1, 10);  // 48 even values
    EXPECT_EQ(job.block_count(), 5u);
    EXPECT_EQ(job.block_first(0), 6u);
    EXPECT_EQ(job.block_last(0), 24u);
    EXPECT_EQ(job.block_first(4), 86u);
    EXPECT_EQ(job.block_last(4), 100u);
    EXPECT_EQ(job.block_of(24), 0u);
    EXPECT_EQ(job.block_of(26), 1u);
}

TEST(VerifyRange, UpToHundred) {
    const auto s = verify_range(table_1e6(), job_for(6, 100));
    EXPECT_TRUE(s.counterexamples.empty());
    EXPECT_TRUE(s.anomalies.empty());
    // Brute force independently finds exactly these, 12, 30, 84 = 3^r + 3.
    const auto brute = oracle::range_summary(6, 100);
    const std::vector<InstanceRef> expected{{12, 1}, {30, 1}, {30, 2}, {84, 1}};
    EXPECT_EQ(refs(brute.equality_cases), expected);
    EXPECT_EQ(refs(s.equality_cases), expected);
    EXPECT_TRUE(s.consistent());
}

TEST(VerifyRange, SingleVacuousValue) {
    const auto s = verify_range(table_1e6(), job_for(6, 6));
    EXPECT_EQ(s.n_count, 1u);
    EXPECT_EQ(s.instances_evaluated, 1u);
    EXPECT_EQ(s.vacuous_count, 1u);
    EXPECT_EQ(s.strict_count + s.equal_count, 0u);
    EXPECT_FALSE(s.max_first_witness);
}

TEST(VerifyRange, AgreesWithBruteForceAndSerialReference) {
    const auto& t = table_1e6();
    const auto engine = verify_range(t, job_for(6, 10'000, 3, 97));
    const auto brute = oracle::range_summary(6, 10'000);
    const auto reference = verify_range_reference(t, 6, 10'000);
    EXPECT_EQ(engine, brute);
    EXPECT_EQ(engine, reference);
    EXPECT_TRUE(engine.consistent());
}

TEST(VerifyRange, SerialReferenceAgreesOnUpperWindow) {
    const auto& t = table_1e6();
    EXPECT_EQ(verify_range(t, job_for(900'000, 910'000, 2, 333)), verify_range_reference(t, 900'000, 910'000));
}

TEST(VerifyRange, EqualityCasesUpToMillion) {
    const auto s = verify_range(table_1e6(), job_for(6, 1'000'000, 2));
    std::vector<InstanceRef> expected;
    for (std::uint64_t p = 9; p + 3 <= 1'000'000; p *= 3) {
        expected.push_back({p + 3, 1});
        if (p + 3 == 30) expected.push_back({30, 2});
    }
    EXPECT_EQ(expected.size(), 12u);
    EXPECT_EQ(refs(s.equality_cases), expected);
    for (const auto& e : s.equality_cases) EXPECT_NE(e.family, EqualityFamily::Novel);
    EXPECT_TRUE(s.counterexamples.empty());
    EXPECT_TRUE(s.anomalies.empty());
}

TEST(VerifyRange, EqualityRecordsRevalidateByTrialDivision) {
    const auto s = verify_range(table_1e6(), job_for(6, 1'000'000, 2));
    const auto primes = oracle::first_odd_primes(64);
    for (const auto& e : s.equality_cases) {
        std::uint64_t top = 0;
        ASSERT_EQ(e.factors.size(), e.k);
        for (std::size_t i = 1; i <= e.k; ++i) {
            const auto v = e.n - primes[i - 1];
            ASSERT_FALSE(oracle::is_prime(v));
            ASSERT_EQ(*oracle::largest_prime_factor(v), e.factors[i - 1]);
            top = std::max<std::uint64_t>(top, e.factors[i - 1]);
        }
        EXPECT_EQ(top, primes[e.k - 1]);
        EXPECT_EQ(e.pk, primes[e.k - 1]);
    }
}

TEST(VerifyRangeProperty, DeterministicAcrossWorkersAndBlocks) {
    const auto& t = table_1e6();
    const auto base = verify_range(t, job_for(6, 200'000, 1));
    for (int workers : {2, 5, 8}) {
        for (std::uint64_t block : {1ull, 777ull, 10'000ull, 200'000ull}) {
            auto job = job_for(6, 200'000, workers, block);
            job.checkpoint_interval = 5'000;
            ASSERT_EQ(verify_range(t, job), base) << workers << " workers, block " << block;
        }
    }
}

TEST(VerifyRangeProperty, SplitMergeEqualsWhole) {
    const auto& t = table_1e6();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<std::uint64_t> lo_dist(3, 30'000);
        std::uint64_t a = 2 * lo_dist(rng), b = 2 * lo_dist(rng);
        if (a > b) std::swap(a, b);
        std::uniform_int_distribution<std::uint64_t> split(a / 2, b / 2);
        const std::uint64_t m = 2 * split(rng);
        const auto whole = verify_range(t, job_for(a, b));
        if (m + 2 > b) continue;
        const auto left = verify_range(t, job_for(a, m));
        const auto right = verify_range(t, job_for(m + 2, b));
        ASSERT_EQ(merged(left, right), whole) << a << " " << m << " " << b;
        ASSERT_EQ(merged(right, left), whole);
    }
}

TEST(VerifyRangeProperty, MergeIsAssociativeWithIdentity) {
    const auto& t = table_1e6();
    const auto x = verify_range(t, job_for(6, 2000));
    const auto y = verify_range(t, job_for(2002, 5000));
    const auto z = verify_range(t, job_for(5002, 9000));
    EXPECT_EQ(merged(merged(x, y), z), merged(x, merged(y, z)));
    EXPECT_EQ(merged(RangeSummary{}, x), x);
    EXPECT_EQ(merged(x, RangeSummary{}), x);
    const auto all = merged(merged(x, y), z);
    EXPECT_EQ(all.instances_evaluated, x.instances_evaluated + y.instances_evaluated + z.instances_evaluated);
    EXPECT_TRUE(all.consistent());
}

TEST(EdgeCases, Enumerate) {
    const auto& t = table_1e6();
    const std::vector<InstanceRef> upto100{{12, 1}, {30, 1}, {30, 2}, {84, 1}};
    const auto r100 = enumerate_edge_cases(t, 100, 1);
    EXPECT_EQ(refs(r100), upto100);
    EXPECT_EQ(r100[0].r, 2u);
    EXPECT_EQ(r100[1].r, 3u);
    EXPECT_EQ(r100[2].family, EqualityFamily::Known30k2);
    EXPECT_EQ(r100[3].r, 4u);

    EXPECT_TRUE(enumerate_edge_cases(t, 11, 1).empty());

    auto upto250 = upto100;
    upto250.push_back({246, 1});
    const auto r250 = enumerate_edge_cases(t, 250, 1);
    EXPECT_EQ(refs(r250), upto250);
    EXPECT_EQ(r250.back().r, 5u);
    EXPECT_THROW(enumerate_edge_cases(build_table(100), 250), CoverageError);
}

TEST(WitnessStatistics, SmallRanges) {
    const auto& t = table_1e6();
    const auto stats = witness_statistics(t, 100, 1);
    ASSERT_TRUE(stats.max_index);
    // (30, 2) is the only instance up to 100 whose first witness index equals k > 1.
    EXPECT_EQ(*stats.max_index, (WitnessExtreme{2, 30, 2}));
    EXPECT_EQ(first_witness_index(t, Instance::make(t, 98, 6)), 1u);
    EXPECT_EQ(stats.histogram.at(1) + stats.histogram.at(2), stats.witnessed_instances);

    const auto empty = witness_statistics(t, 8, 1);
    EXPECT_TRUE(empty.histogram.empty());
    EXPECT_EQ(empty.witnessed_instances, 0u);
    EXPECT_FALSE(empty.max_index);
}

TEST(WitnessStatistics, MatchesBruteForceOnTenThousand) {
    const auto& t = table_1e6();
    EXPECT_EQ(witness_statistics(t, 10'000, 2), witness_statistics(oracle::range_summary(6, 10'000)));
}
