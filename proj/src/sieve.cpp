#include "goldcheck/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "goldcheck/errors.hpp"

namespace goldcheck {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void check_limit(std::uint64_t limit, std::uint64_t ceiling) {
    if (limit < 6) {
        throw ConfigError("table limit " + std::to_string(limit) + " is below the minimum of 6");
    }
    if (limit >= std::numeric_limits<std::uint32_t>::max()) {
        throw ConfigError("table limit " + std::to_string(limit) +
                          " exceeds the 32-bit spf encoding (max 4294967294)");
    }
    if (table_footprint(limit) > ceiling) {
        throw ConfigError("table limit " + std::to_string(limit) + " needs " +
                          std::to_string(table_footprint(limit)) + " bytes, above the memory ceiling of " +
                          std::to_string(ceiling));
    }
}

// Plain sieve of Eratosthenes up to `bound`, returning every prime.
std::vector<std::uint32_t> small_primes(std::uint64_t bound) {
    std::vector<char> composite(bound + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = 1;
    }
    return primes;
}

}  // namespace

std::uint64_t table_footprint(std::uint64_t limit) {
    // spf entries + primality words + a generous bound on the odd prime list.
    const std::uint64_t entries = limit + 1;
    const std::uint64_t words = entries / 64 + 1;
    return entries * sizeof(std::uint32_t) + words * sizeof(std::uint64_t) + (entries / 2) * sizeof(std::uint32_t) / 4;
}

PrimeTable PrimeTable::from_spf(std::uint64_t limit, std::vector<std::uint32_t> spf) {
    PrimeTable table;
    table.limit_ = limit;
    table.bits_.assign((limit + 1) / 64 + 1, 0);
    for (std::uint64_t x = 2; x <= limit; ++x) {
        if (spf[x] == x) {
            table.bits_[x >> 6] |= std::uint64_t{1} << (x & 63);
            if (x != 2) table.odd_primes_.push_back(static_cast<std::uint32_t>(x));
        }
    }
    table.spf_ = std::move(spf);
    return table;
}

PrimeTable build_table(std::uint64_t limit, const SieveOptions& options) {
    check_limit(limit, options.memory_ceiling);
    if (options.segment_size == 0) throw ConfigError("segment size must be positive");

    const auto base = small_primes(isqrt(limit));
    std::vector<std::uint32_t> spf(limit + 1, 0);
    const std::uint64_t seg = options.segment_size;
    const auto segments = static_cast<std::int64_t>((limit + 1 + seg - 1) / seg);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

    // Segments own disjoint slices of spf, so no synchronisation is needed.
    // Within a segment, base primes are applied in increasing order and only
    // unset entries are written, which makes each entry the smallest factor.
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::int64_t s = 0; s < segments; ++s) {
        const std::uint64_t lo = static_cast<std::uint64_t>(s) * seg;
        const std::uint64_t hi = std::min(lo + seg, limit + 1);
        for (std::uint32_t p : base) {
            const std::uint64_t pp = std::uint64_t{p} * p;
            if (pp >= hi) break;
            std::uint64_t m = std::max(pp, (lo + p - 1) / p * p);
            for (; m < hi; m += p) {
                if (spf[m] == 0) spf[m] = p;
            }
        }
        for (std::uint64_t x = std::max<std::uint64_t>(lo, 2); x < hi; ++x) {
            if (spf[x] == 0) spf[x] = static_cast<std::uint32_t>(x);
        }
    }
    return PrimeTable::from_spf(limit, std::move(spf));
}

PrimeTable build_table_reference(std::uint64_t limit) {
    check_limit(limit, std::numeric_limits<std::uint64_t>::max());
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] != 0) continue;
        spf[i] = static_cast<std::uint32_t>(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) {
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    return PrimeTable::from_spf(limit, std::move(spf));
}

bool PrimeTable::is_prime(std::uint64_t x) const {
    if (x > limit_) throw CoverageError("primality query " + std::to_string(x) + " beyond table limit " + std::to_string(limit_));
    return x >= 2 && is_prime_unchecked(x);
}

std::uint32_t PrimeTable::spf(std::uint64_t x) const {
    if (x < 2 || x > limit_) {
        throw RangeError("spf query " + std::to_string(x) + " outside [2, " + std::to_string(limit_) + "]");
    }
    return spf_[x];
}

std::uint32_t PrimeTable::odd_prime(std::size_t index) const {
    if (index == 0 || index > odd_primes_.size()) {
        throw CoverageError("odd prime index " + std::to_string(index) + " outside [1, " +
                            std::to_string(odd_primes_.size()) + "] for table limit " + std::to_string(limit_));
    }
    return odd_primes_[index - 1];
}

std::optional<std::size_t> PrimeTable::odd_prime_index(std::uint64_t p) const {
    auto it = std::lower_bound(odd_primes_.begin(), odd_primes_.end(), p);
    if (it == odd_primes_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - odd_primes_.begin()) + 1;
}

std::size_t PrimeTable::odd_primes_below(std::uint64_t bound) const {
    return static_cast<std::size_t>(std::lower_bound(odd_primes_.begin(), odd_primes_.end(), bound) -
                                    odd_primes_.begin());
}

std::optional<std::uint32_t> largest_prime_factor(const PrimeTable& table, std::uint64_t x) {
    if (x < 1 || x > table.limit()) {
        throw RangeError("largest_prime_factor argument " + std::to_string(x) + " outside [1, " +
                         std::to_string(table.limit()) + "]");
    }
    if (x == 1) return std::nullopt;
    std::uint32_t p = 0;
    while (x > 1) {
        p = table.spf_unchecked(x);
        x /= p;
    }
    return p;
}

std::uint32_t next_prime(const PrimeTable& table, std::uint64_t p) {
    if (!table.is_prime(p)) throw PreconditionError("next_prime argument " + std::to_string(p) + " is not prime");
    if (p == 2) return table.odd_prime(1);
    auto primes = table.odd_primes();
    auto it = std::upper_bound(primes.begin(), primes.end(), p);
    if (it == primes.end()) {
        throw CoverageError("no prime above " + std::to_string(p) + " within table limit " +
                            std::to_string(table.limit()));
    }
    return *it;
}

}  // namespace goldcheck
