#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace goldcheck {

struct SieveOptions {
    // Entries (integers) per segment. 64K uint32 entries = 256 KiB, sized for L2.
    std::uint64_t segment_size = 1u << 16;
    // Upper bound on bytes the finished table may occupy.
    std::uint64_t memory_ceiling = 8ull << 30;
    // OpenMP threads for segment marking; 0 = runtime default.
    int threads = 0;
};

// Bytes a table covering [2, limit] occupies once built.
std::uint64_t table_footprint(std::uint64_t limit);

// Primality, smallest-prime-factor and the ordered odd primes for every
// integer in [2, limit]. Immutable after construction; concurrent reads are safe.
class PrimeTable {
public:
    std::uint64_t limit() const noexcept { return limit_; }

    bool is_prime(std::uint64_t x) const;
    std::uint32_t spf(std::uint64_t x) const;

    // p_1 = 3, p_2 = 5, ... (2 excluded, 1-based).
    std::uint32_t odd_prime(std::size_t index) const;
    std::size_t odd_prime_count() const noexcept { return odd_primes_.size(); }
    std::span<const std::uint32_t> odd_primes() const noexcept { return odd_primes_; }

    // Number of primes <= limit, including 2.
    std::uint64_t prime_count() const noexcept { return odd_primes_.size() + 1; }

    // 1-based index k with odd_prime(k) == p, or nullopt if p is not an odd prime.
    std::optional<std::size_t> odd_prime_index(std::uint64_t p) const;

    // Largest k with odd_prime(k) < bound (0 when none).
    std::size_t odd_primes_below(std::uint64_t bound) const;

    // Unchecked accessors for the hot loops in search. Caller guarantees 2 <= x <= limit.
    bool is_prime_unchecked(std::uint64_t x) const noexcept {
        return (bits_[x >> 6] >> (x & 63)) & 1u;
    }
    std::uint32_t spf_unchecked(std::uint64_t x) const noexcept { return spf_[x]; }

    std::span<const std::uint64_t> primality_words() const noexcept { return bits_; }
    std::span<const std::uint32_t> spf_entries() const noexcept { return spf_; }

    friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

private:
    friend PrimeTable build_table(std::uint64_t, const SieveOptions&);
    friend PrimeTable build_table_reference(std::uint64_t);
    friend PrimeTable load_table_cache(const std::filesystem::path&);

    // Derives the bitset and odd prime list from a completed spf array.
    static PrimeTable from_spf(std::uint64_t limit, std::vector<std::uint32_t> spf);

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> odd_primes_;
};

// Segmented smallest-prime-factor sieve, OpenMP-parallel over segments.
// Deterministic: the result does not depend on segment size or thread count.
PrimeTable build_table(std::uint64_t limit, const SieveOptions& options = {});

// Single-threaded, unsegmented sieve kept as the reference for tests and benchmarks.
PrimeTable build_table_reference(std::uint64_t limit);

// Largest prime dividing x, by repeated division by spf. nullopt exactly when x == 1.
std::optional<std::uint32_t> largest_prime_factor(const PrimeTable& table, std::uint64_t x);

// Smallest prime strictly greater than the prime p.
std::uint32_t next_prime(const PrimeTable& table, std::uint64_t p);

// Binary cache: magic, format version, limit, primality words, spf entries.
inline constexpr std::uint32_t kTableCacheVersion = 1;
void save_table_cache(const PrimeTable& table, const std::filesystem::path& path);
PrimeTable load_table_cache(const std::filesystem::path& path);

// Loads the cache when it exists and covers exactly `limit`; otherwise builds and
// (re)writes it. An empty path disables caching.
PrimeTable load_or_build_table(std::uint64_t limit, const std::filesystem::path& cache,
                               const SieveOptions& options = {});

}  // namespace goldcheck
