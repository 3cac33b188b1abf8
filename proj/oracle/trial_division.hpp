#pragma once

// Trial-division reference for the engine. Shares only plain data types
// (InstanceOutcome, RangeSummary, EdgeCaseRecord) with the engine; no sieve,
// no spf table and none of the search kernel's shortcuts.

#include <cstdint>
#include <optional>
#include <vector>

#include "goldcheck/conjecture.hpp"
#include "goldcheck/summary.hpp"

namespace goldcheck::oracle {

bool is_prime(std::uint64_t x);
std::uint64_t smallest_factor(std::uint64_t x);
std::optional<std::uint64_t> largest_prime_factor(std::uint64_t x);

// pi(limit) from a plain boolean sieve written independently of the engine.
std::uint64_t prime_count(std::uint64_t limit);

// First `count` odd primes by trial division.
std::vector<std::uint64_t> first_odd_primes(std::size_t count);

// Memoises trial-division results for one range of values.
class Factorizer {
public:
    explicit Factorizer(std::uint64_t limit);
    bool is_prime(std::uint64_t x);
    std::uint64_t largest_prime_factor(std::uint64_t x);
    const std::vector<std::uint64_t>& odd_primes() const { return odd_primes_; }

private:
    std::vector<std::uint32_t> lpf_;  // 0 = not computed yet
    std::vector<std::uint64_t> odd_primes_;
};

// Evaluates (n, k) straight from the definitions.
InstanceOutcome evaluate(Factorizer& f, std::uint64_t n, std::size_t k);

// Least i with lpf(n - p_i) >= p_k, on a witnessed instance.
std::size_t first_witness(Factorizer& f, std::uint64_t n, std::size_t k);

// Whole-range summary: each (n, k) evaluated from scratch for k = 1, 2, ...
// until the first vacuous k.
RangeSummary range_summary(std::uint64_t n_min, std::uint64_t n_max);

}  // namespace goldcheck::oracle
