#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "goldcheck/sieve.hpp"

namespace goldcheck {

// One (n, k) pair: n even, n >= 6, and p_k < n.
class Instance {
public:
    // Validates against the table; throws PreconditionError or CoverageError.
    static Instance make(const PrimeTable& table, std::uint64_t n, std::size_t k);

    std::uint64_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::uint32_t pk() const noexcept { return pk_; }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    Instance(std::uint64_t n, std::size_t k, std::uint32_t pk) : n_(n), k_(k), pk_(pk) {}

    std::uint64_t n_;
    std::size_t k_;
    std::uint32_t pk_;
};

namespace outcome {

// Some n - p_i is prime with i <= k; i is the least such index.
struct Vacuous {
    std::size_t i_star;
    std::uint64_t prime_hit;
    friend bool operator==(const Vacuous&, const Vacuous&) = default;
};

// All n - p_i composite and some largest prime factor exceeds p_k. `i` is the
// least index whose largest prime factor exceeds p_k and `factor` is that factor.
struct WitnessStrict {
    std::size_t i;
    std::uint32_t factor;
    friend bool operator==(const WitnessStrict&, const WitnessStrict&) = default;
};

// All composite, and the largest prime factor over i <= k is exactly p_k,
// first attained at `i`.
struct WitnessEqual {
    std::size_t i;
    friend bool operator==(const WitnessEqual&, const WitnessEqual&) = default;
};

// All composite and every largest prime factor is below p_k.
struct CounterexampleCandidate {
    std::vector<std::uint32_t> factors;
    friend bool operator==(const CounterexampleCandidate&, const CounterexampleCandidate&) = default;
};

// n - p_i == 1 before any prime hit: the unit has no prime factor.
struct AnomalyUnit {
    std::size_t i;
    friend bool operator==(const AnomalyUnit&, const AnomalyUnit&) = default;
};

}  // namespace outcome

using InstanceOutcome = std::variant<outcome::Vacuous, outcome::WitnessStrict, outcome::WitnessEqual,
                                     outcome::CounterexampleCandidate, outcome::AnomalyUnit>;

std::string outcome_name(const InstanceOutcome& outcome);

enum class EqualityFamily { PowerOf3Plus3, Known30k2, Novel };

std::string family_name(EqualityFamily family);
std::optional<EqualityFamily> parse_family(const std::string& name);

// A confirmed case where the maximum largest prime factor equals p_k.
struct EdgeCaseRecord {
    std::uint64_t n = 0;
    std::size_t k = 0;
    std::uint32_t pk = 0;
    // largest_prime_factor(n - p_i) for i = 1..k
    std::vector<std::uint32_t> factors;
    EqualityFamily family = EqualityFamily::Novel;
    // Exponent with n - 3 = 3^r; set only for PowerOf3Plus3.
    std::optional<unsigned> r;

    friend bool operator==(const EdgeCaseRecord&, const EdgeCaseRecord&) = default;
};

// Tags an equality case. Shared by the evaluator and the range scanner.
EqualityFamily equality_family(std::uint64_t n, std::size_t k, std::optional<unsigned>& r);

// Walks the Lemma's constructive proof for one witness outcome.
struct LemmaTrace {
    Instance instance;
    InstanceOutcome source;
    // Index i whose value n - p_i carries the witness factor.
    std::size_t i = 0;
    // n - p_i
    std::uint64_t value = 0;
    // n - p_i == m * p_k in the equality branch.
    std::optional<std::uint64_t> m;
    std::uint32_t produced_prime = 0;
    bool used_bertrand = false;
};

InstanceOutcome evaluate_instance(const PrimeTable& table, const Instance& inst);

std::optional<EdgeCaseRecord> classify_equality(const PrimeTable& table, const Instance& inst,
                                                const InstanceOutcome& outcome);

// Throws ProofViolation if any inequality of the proof fails.
LemmaTrace construct_lemma_prime(const PrimeTable& table, const Instance& inst, const InstanceOutcome& outcome);

// Least i <= k such that every n - p_j (j <= k) is composite and n - p_i has a
// prime factor >= p_k. nullopt for vacuous instances and for instances with no witness.
std::optional<std::size_t> first_witness_index(const PrimeTable& table, const Instance& inst);

enum class DescentMode {
    Fast,    // scan for the decomposition only
    Verify,  // also run the lemma at every nonvacuous k below the hit
};

struct DescentStep {
    std::size_t k;
    std::uint32_t pk;
    std::uint32_t produced_prime;
    bool used_bertrand;
};

struct DescentTrace {
    std::uint64_t n = 0;
    // K(n): largest k with p_k < n.
    std::size_t max_k = 0;
    // Index of the summand p_i in the decomposition.
    std::size_t i = 0;
    std::uint32_t p = 0;
    std::uint64_t q = 0;
    // Verify mode: one lemma application per k = 1 .. i - 1, each producing a
    // prime in (p_k, n), which is what lets the descent reach p_i.
    std::vector<DescentStep> steps;
};

// Minimal-index odd-prime decomposition n = p_i + (n - p_i). If none exists,
// runs the instance (n, K(n)) through the evaluator and lemma and throws
// GoldbachCounterexample describing which branch fired.
DescentTrace goldbach_decompose(const PrimeTable& table, std::uint64_t n, DescentMode mode = DescentMode::Fast);

}  // namespace goldcheck
