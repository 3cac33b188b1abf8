#include <gtest/gtest.h>

#include "goldcheck/conjecture.hpp"
#include "goldcheck/errors.hpp"
#include "trial_division.hpp"

using namespace goldcheck;

namespace {

const PrimeTable& table_1e5() {
    static const auto table = build_table(100'000);
    return table;
}

bool is_witness(const InstanceOutcome& o) {
    return std::holds_alternative<outcome::WitnessStrict>(o) || std::holds_alternative<outcome::WitnessEqual>(o);
}

}  // namespace

TEST(Instance, Validation) {
    const auto& t = table_1e5();
    EXPECT_THROW(Instance::make(t, 31, 1), PreconditionError);
    EXPECT_THROW(Instance::make(t, 4, 1), PreconditionError);
    EXPECT_THROW(Instance::make(t, 30, 0), PreconditionError);
    EXPECT_THROW(Instance::make(t, 30, 10), PreconditionError);  // p_10 = 31 > 30
    EXPECT_THROW(Instance::make(t, 100'002, 1), CoverageError);
    const auto inst = Instance::make(t, 30, 9);
    EXPECT_EQ(inst.pk(), 29u);
}

TEST(Evaluate, WorkedExamples) {
    const auto& t = table_1e5();
    EXPECT_EQ(evaluate_instance(t, Instance::make(t, 30, 2)), InstanceOutcome(outcome::WitnessEqual{2}));
    EXPECT_EQ(evaluate_instance(t, Instance::make(t, 12, 1)), InstanceOutcome(outcome::WitnessEqual{1}));
    EXPECT_EQ(evaluate_instance(t, Instance::make(t, 10, 1)), InstanceOutcome(outcome::Vacuous{1, 7}));
}

TEST(Evaluate, StrictExampleMatchesBruteForce) {
    // 95, 93, 91, 87, 85, 81 are all composite; lpf(95) = 19 >= p_6 = 17.
    for (std::uint64_t v : {95, 93, 91, 87, 85, 81}) EXPECT_FALSE(oracle::is_prime(v)) << v;
    oracle::Factorizer f(100);
    const auto brute = oracle::evaluate(f, 98, 6);
    EXPECT_EQ(brute, InstanceOutcome(outcome::WitnessStrict{1, 19}));
    const auto& t = table_1e5();
    EXPECT_EQ(evaluate_instance(t, Instance::make(t, 98, 6)), brute);
}

TEST(Evaluate, UnitAnomalyBoundaryAtFour) {
    // n = 4, k = 1 gives n - 3 = 1: not prime, no prime factor. Instances start at n = 6.
    oracle::Factorizer f(10);
    EXPECT_EQ(oracle::evaluate(f, 4, 1), InstanceOutcome(outcome::AnomalyUnit{1}));
    EXPECT_THROW(Instance::make(table_1e5(), 4, 1), PreconditionError);
}

TEST(Evaluate, CoverageAndForeignTable) {
    const auto big = build_table(1000);
    const auto small = build_table(100);
    const auto inst = Instance::make(big, 500, 3);
    EXPECT_THROW(evaluate_instance(small, inst), CoverageError);
}

TEST(FirstWitness, Examples) {
    const auto& t = table_1e5();
    EXPECT_EQ(first_witness_index(t, Instance::make(t, 98, 6)), 1u);
    EXPECT_EQ(first_witness_index(t, Instance::make(t, 30, 2)), 2u);
    EXPECT_EQ(first_witness_index(t, Instance::make(t, 10, 1)), std::nullopt);
}

TEST(ClassifyEquality, Families) {
    const auto& t = table_1e5();
    const auto i84 = Instance::make(t, 84, 1);
    const auto r84 = classify_equality(t, i84, evaluate_instance(t, i84));
    ASSERT_TRUE(r84);
    EXPECT_EQ(r84->family, EqualityFamily::PowerOf3Plus3);
    EXPECT_EQ(r84->r, 4u);
    EXPECT_EQ(r84->factors, std::vector<std::uint32_t>{3});

    const auto i30 = Instance::make(t, 30, 2);
    const auto r30 = classify_equality(t, i30, evaluate_instance(t, i30));
    ASSERT_TRUE(r30);
    EXPECT_EQ(r30->family, EqualityFamily::Known30k2);
    EXPECT_EQ(r30->factors, (std::vector<std::uint32_t>{3, 5}));
    EXPECT_FALSE(r30->r);

    const auto i98 = Instance::make(t, 98, 6);
    EXPECT_EQ(classify_equality(t, i98, evaluate_instance(t, i98)), std::nullopt);
    EXPECT_THROW(classify_equality(t, i98, outcome::WitnessEqual{2}), PreconditionError);
}

TEST(Lemma, BertrandBranchAtThirty) {
    const auto& t = table_1e5();
    const auto inst = Instance::make(t, 30, 2);
    const auto trace = construct_lemma_prime(t, inst, evaluate_instance(t, inst));
    EXPECT_EQ(trace.m, 5u);
    EXPECT_EQ(trace.value, 25u);
    EXPECT_EQ(trace.produced_prime, 7u);
    EXPECT_EQ(trace.produced_prime, t.odd_prime(3));
    EXPECT_TRUE(trace.used_bertrand);
}

TEST(Lemma, StrictBranch) {
    const auto& t = table_1e5();
    const auto inst = Instance::make(t, 98, 6);
    const auto trace = construct_lemma_prime(t, inst, evaluate_instance(t, inst));
    EXPECT_EQ(trace.produced_prime, 19u);
    EXPECT_FALSE(trace.m);
    EXPECT_FALSE(trace.used_bertrand);
}

TEST(Lemma, SmallestFamilyMember) {
    const auto& t = table_1e5();
    const auto inst = Instance::make(t, 12, 1);
    const auto trace = construct_lemma_prime(t, inst, evaluate_instance(t, inst));
    EXPECT_EQ(trace.m, 3u);
    EXPECT_EQ(trace.produced_prime, 5u);
    EXPECT_LT(trace.produced_prime, 12u);
}

TEST(Lemma, RejectsNonWitnessOutcomes) {
    const auto& t = table_1e5();
    const auto inst = Instance::make(t, 10, 1);
    EXPECT_THROW(construct_lemma_prime(t, inst, evaluate_instance(t, inst)), PreconditionError);
    const auto i30 = Instance::make(t, 30, 2);
    EXPECT_THROW(construct_lemma_prime(t, i30, outcome::WitnessStrict{1, 7}), PreconditionError);
}

TEST(Lemma, ProofViolationCarriesInequality) {
    const ProofViolation v("p_{k+1} = 11 < 2*p_k = 10");
    EXPECT_EQ(v.inequality(), "p_{k+1} = 11 < 2*p_k = 10");
    EXPECT_NE(std::string(v.what()).find("2*p_k"), std::string::npos);
}

TEST(Goldbach, SpotValuesMatchDirectScan) {
    const auto& t = table_1e5();
    for (std::uint64_t n : {6, 30, 98}) {
        std::uint64_t p = 3;
        while (!(oracle::is_prime(p) && oracle::is_prime(n - p))) p += 2;
        const auto trace = goldbach_decompose(t, n);
        EXPECT_EQ(trace.p, p) << n;
        EXPECT_EQ(trace.q, n - p) << n;
    }
    EXPECT_EQ(goldbach_decompose(t, 6).p, 3u);
    EXPECT_EQ(goldbach_decompose(t, 30).q, 23u);
    EXPECT_EQ(goldbach_decompose(t, 98).p, 19u);
    EXPECT_EQ(goldbach_decompose(t, 98).q, 79u);
}

TEST(Goldbach, VerifyModeRecordsDescent) {
    const auto& t = table_1e5();
    const auto trace = goldbach_decompose(t, 30, DescentMode::Verify);
    EXPECT_EQ(trace.max_k, 9u);
    EXPECT_EQ(trace.i, 3u);
    ASSERT_EQ(trace.steps.size(), 2u);
    EXPECT_EQ(trace.steps[0].produced_prime, 5u);
    EXPECT_EQ(trace.steps[1].produced_prime, 7u);
    EXPECT_TRUE(trace.steps[1].used_bertrand);
    EXPECT_TRUE(goldbach_decompose(t, 30, DescentMode::Fast).steps.empty());
}

TEST(Goldbach, Errors) {
    const auto& t = table_1e5();
    EXPECT_THROW(goldbach_decompose(t, 7), PreconditionError);
    EXPECT_THROW(goldbach_decompose(t, 4), PreconditionError);
    EXPECT_THROW(goldbach_decompose(t, 100'002), CoverageError);
}

TEST(ConjectureProperty, OutcomeMatchesBruteForceForAllInstancesUpTo1e4) {
    const auto& t = table_1e5();
    oracle::Factorizer f(10'000);
    std::uint64_t checked = 0;
    for (std::uint64_t n = 6; n <= 10'000; n += 2) {
        for (std::size_t k = 1; t.odd_prime(k) < n; ++k) {
            const auto engine = evaluate_instance(t, Instance::make(t, n, k));
            ASSERT_EQ(engine, oracle::evaluate(f, n, k)) << "n = " << n << ", k = " << k;
            ++checked;
        }
    }
    EXPECT_GT(checked, 3'000'000u);
}

TEST(ConjectureProperty, VacuousnessIsMonotoneInK) {
    const auto& t = table_1e5();
    for (std::uint64_t n = 6; n <= 3000; n += 2) {
        bool vacuous = false;
        for (std::size_t k = 1; t.odd_prime(k) < n; ++k) {
            const bool now = std::holds_alternative<outcome::Vacuous>(evaluate_instance(t, Instance::make(t, n, k)));
            ASSERT_TRUE(!vacuous || now) << "n = " << n << ", k = " << k;
            vacuous = now;
        }
    }
}

TEST(ConjectureProperty, StrictWitnessCarriesForward) {
    const auto& t = table_1e5();
    for (std::uint64_t n = 6; n <= 5000; n += 2) {
        for (std::size_t k = 1; t.odd_prime(k + 1) < n; ++k) {
            const auto here = evaluate_instance(t, Instance::make(t, n, k));
            const auto* strict = std::get_if<outcome::WitnessStrict>(&here);
            if (!strict || strict->factor < t.odd_prime(k + 1)) continue;
            const auto next = evaluate_instance(t, Instance::make(t, n, k + 1));
            ASSERT_FALSE(std::holds_alternative<outcome::CounterexampleCandidate>(next)) << n << " " << k;
        }
    }
}

TEST(ConjectureProperty, KOneEqualityExactlyOnPowersOfThree) {
    const auto& t = table_1e5();
    for (std::uint64_t n = 8; n <= t.limit(); n += 2) {
        if (t.is_prime(n - 3)) continue;
        const auto o = evaluate_instance(t, Instance::make(t, n, 1));
        ASSERT_FALSE(std::holds_alternative<outcome::CounterexampleCandidate>(o)) << n;
        std::uint64_t v = n - 3;
        while (v % 3 == 0) v /= 3;
        ASSERT_EQ(std::holds_alternative<outcome::WitnessEqual>(o), v == 1) << n;
    }
}

TEST(ConjectureProperty, LemmaProducesPrimeInOpenInterval) {
    const auto& t = table_1e5();
    std::uint64_t bertrand = 0;
    for (std::uint64_t n = 6; n <= 4000; n += 2) {
        for (std::size_t k = 1; t.odd_prime(k) < n; ++k) {
            const auto inst = Instance::make(t, n, k);
            const auto o = evaluate_instance(t, inst);
            if (std::holds_alternative<outcome::Vacuous>(o)) break;
            if (!is_witness(o)) continue;
            const auto trace = construct_lemma_prime(t, inst, o);
            ASSERT_LT(inst.pk(), trace.produced_prime);
            ASSERT_LT(trace.produced_prime, n);
            ASSERT_TRUE(t.is_prime(trace.produced_prime));
            ASSERT_EQ(trace.used_bertrand, trace.m.has_value());
            ASSERT_EQ(trace.used_bertrand, std::holds_alternative<outcome::WitnessEqual>(o));
            if (trace.m) {
                ASSERT_EQ(*trace.m % 2, 1u);
                ASSERT_GE(*trace.m, 3u);
                ASSERT_EQ(*trace.m * inst.pk(), trace.value);
            }
            bertrand += trace.used_bertrand;
        }
    }
    EXPECT_EQ(bertrand, 7u);  // (12,1), (30,1), (30,2), (84,1), (246,1), (732,1), (2190,1)
}

TEST(ConjectureProperty, GoldbachTraceIsMinimalDecomposition) {
    const auto& t = table_1e5();
    for (std::uint64_t n = 6; n <= 10'000; n += 2) {
        const auto trace = goldbach_decompose(t, n, DescentMode::Verify);
        ASSERT_EQ(trace.p + trace.q, n);
        ASSERT_TRUE(oracle::is_prime(trace.p) && oracle::is_prime(trace.q));
        for (std::uint64_t p = 3; p < trace.p; p += 2) {
            ASSERT_FALSE(oracle::is_prime(p) && oracle::is_prime(n - p)) << n;
        }
        ASSERT_EQ(trace.steps.size(), trace.i - 1);
    }
}
