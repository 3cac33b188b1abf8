#include "trial_division.hpp"

#include <algorithm>

namespace goldcheck::oracle {

bool is_prime(std::uint64_t x) {
    if (x < 2) return false;
    return smallest_factor(x) == x;
}

std::uint64_t smallest_factor(std::uint64_t x) {
    if (x % 2 == 0) return 2;
    for (std::uint64_t d = 3; d * d <= x; d += 2) {
        if (x % d == 0) return d;
    }
    return x;
}

std::optional<std::uint64_t> largest_prime_factor(std::uint64_t x) {
    if (x < 2) return std::nullopt;
    std::uint64_t largest = 0;
    for (std::uint64_t d = 2; d * d <= x; ++d) {
        while (x % d == 0) {
            largest = d;
            x /= d;
        }
    }
    if (x > 1) largest = x;
    return largest;
}

std::uint64_t prime_count(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::uint64_t count = 0;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        ++count;
        for (std::uint64_t j = i + i; j <= limit; j += i) composite[j] = true;
    }
    return count;
}

std::vector<std::uint64_t> first_odd_primes(std::size_t count) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t x = 3; primes.size() < count; x += 2) {
        if (is_prime(x)) primes.push_back(x);
    }
    return primes;
}

Factorizer::Factorizer(std::uint64_t limit) : lpf_(limit + 1, 0) {
    for (std::uint64_t x = 3; x <= limit; x += 2) {
        if (is_prime(x)) odd_primes_.push_back(x);
    }
}

std::uint64_t Factorizer::largest_prime_factor(std::uint64_t x) {
    if (lpf_[x] == 0) lpf_[x] = static_cast<std::uint32_t>(*oracle::largest_prime_factor(x));
    return lpf_[x];
}

bool Factorizer::is_prime(std::uint64_t x) {
    return x >= 2 && largest_prime_factor(x) == x;
}

InstanceOutcome evaluate(Factorizer& f, std::uint64_t n, std::size_t k) {
    const auto& p = f.odd_primes();
    for (std::size_t i = 1; i <= k; ++i) {
        const std::uint64_t v = n - p[i - 1];
        if (v == 1) return outcome::AnomalyUnit{i};
        if (f.is_prime(v)) return outcome::Vacuous{i, v};
    }
    const std::uint64_t pk = p[k - 1];
    for (std::size_t i = 1; i <= k; ++i) {
        const auto q = f.largest_prime_factor(n - p[i - 1]);
        if (q > pk) return outcome::WitnessStrict{i, static_cast<std::uint32_t>(q)};
    }
    for (std::size_t i = 1; i <= k; ++i) {
        if (f.largest_prime_factor(n - p[i - 1]) == pk) return outcome::WitnessEqual{i};
    }
    std::vector<std::uint32_t> factors;
    for (std::size_t i = 1; i <= k; ++i) factors.push_back(static_cast<std::uint32_t>(f.largest_prime_factor(n - p[i - 1])));
    return outcome::CounterexampleCandidate{factors};
}

std::size_t first_witness(Factorizer& f, std::uint64_t n, std::size_t k) {
    const auto& p = f.odd_primes();
    for (std::size_t i = 1; i <= k; ++i) {
        if (f.largest_prime_factor(n - p[i - 1]) >= p[k - 1]) return i;
    }
    return 0;
}

namespace {

std::optional<unsigned> power_of_three_exponent(std::uint64_t v) {
    unsigned r = 0;
    std::uint64_t power = 1;
    while (power < v) {
        power *= 3;
        ++r;
    }
    if (power == v) return r;
    return std::nullopt;
}

bool ratio_greater(std::size_t a_index, std::size_t a_k, std::size_t b_index, std::size_t b_k) {
    return a_index * b_k > b_index * a_k;
}

}  // namespace

RangeSummary range_summary(std::uint64_t n_min, std::uint64_t n_max) {
    Factorizer f(n_max);
    const auto& p = f.odd_primes();
    RangeSummary s;
    for (std::uint64_t n = n_min; n <= n_max; n += 2) {
        if (s.n_count == 0) s.n_min = n;
        s.n_max = n;
        ++s.n_count;
        for (std::size_t k = 1; k <= p.size() && p[k - 1] < n; ++k) {
            ++s.instances_evaluated;
            const auto result = evaluate(f, n, k);
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
            if (std::holds_alternative<outcome::WitnessEqual>(result)) {
                ++s.equal_count;
                EdgeCaseRecord e;
                e.n = n;
                e.k = k;
                e.pk = static_cast<std::uint32_t>(p[k - 1]);
                for (std::size_t i = 1; i <= k; ++i) {
                    e.factors.push_back(static_cast<std::uint32_t>(f.largest_prime_factor(n - p[i - 1])));
                }
                const auto r = k == 1 ? power_of_three_exponent(n - 3) : std::nullopt;
                if (r && *r >= 2) {
                    e.family = EqualityFamily::PowerOf3Plus3;
                    e.r = r;
                } else if (n == 30 && k == 2) {
                    e.family = EqualityFamily::Known30k2;
                } else {
                    e.family = EqualityFamily::Novel;
                }
                s.equality_cases.push_back(e);
            } else {
                ++s.strict_count;
            }

            const std::size_t index = first_witness(f, n, k);
            std::size_t bucket = index;
            if (index > 64) {
                bucket = 65;
                while (bucket * 2 - 1 <= index) bucket = bucket * 2 - 1;
            }
            ++s.witness_index_histogram[bucket];
            s.witness_index_sum += index;
            // Ascending (n, k) scan: only a strictly better value replaces the current one.
            if (!s.max_first_witness || index > s.max_first_witness->index) s.max_first_witness = WitnessExtreme{index, n, k};
            if (!s.max_witness_ratio || ratio_greater(index, k, s.max_witness_ratio->index, s.max_witness_ratio->k)) {
                s.max_witness_ratio = WitnessExtreme{index, n, k};
            }
        }
    }
    return s;
}

}  // namespace goldcheck::oracle
