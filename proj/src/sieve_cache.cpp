#include <array>
#include <cstring>
#include <fstream>
#include <iostream>

#include "goldcheck/errors.hpp"
#include "goldcheck/sieve.hpp"

namespace goldcheck {

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'C', 'S', 'I', 'E', 'V', 'E', '\0'};
// Written natively; a reader on a machine of the other byte order sees a
// mismatched marker and rejects the file.
constexpr std::uint32_t kByteOrderMark = 0x01020304;

template <class T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

}  // namespace

void save_table_cache(const PrimeTable& table, const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open sieve cache for writing: " + tmp.string());
        out.write(kMagic.data(), kMagic.size());
        write_pod(out, kTableCacheVersion);
        write_pod(out, kByteOrderMark);
        write_pod(out, table.limit());
        const auto words = table.primality_words();
        const auto spf = table.spf_entries();
        write_pod(out, static_cast<std::uint64_t>(words.size()));
        write_pod(out, static_cast<std::uint64_t>(spf.size()));
        out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size_bytes()));
        out.write(reinterpret_cast<const char*>(spf.data()), static_cast<std::streamsize>(spf.size_bytes()));
        if (!out.flush()) throw IoError("failed writing sieve cache " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move sieve cache into place at " + path.string() + ": " + ec.message());
}

PrimeTable load_table_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open sieve cache " + path.string());

    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw FormatMismatch(path.string() + " is not a goldcheck sieve cache");
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kTableCacheVersion) {
        throw FormatMismatch("sieve cache " + path.string() + " has format version " + std::to_string(version) +
                             ", expected " + std::to_string(kTableCacheVersion));
    }
    if (read_pod<std::uint32_t>(in) != kByteOrderMark) {
        throw FormatMismatch("sieve cache " + path.string() + " was written with a different byte order");
    }
    const auto limit = read_pod<std::uint64_t>(in);
    const auto word_count = read_pod<std::uint64_t>(in);
    const auto spf_count = read_pod<std::uint64_t>(in);
    if (!in || limit < 6 || spf_count != limit + 1 || word_count != (limit + 1) / 64 + 1) {
        throw FormatMismatch("sieve cache " + path.string() + " has an inconsistent header");
    }

    std::vector<std::uint64_t> words(word_count);
    std::vector<std::uint32_t> spf(spf_count);
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(word_count * sizeof(std::uint64_t)));
    in.read(reinterpret_cast<char*>(spf.data()), static_cast<std::streamsize>(spf_count * sizeof(std::uint32_t)));
    if (!in) throw FormatMismatch("sieve cache " + path.string() + " is truncated");

    auto table = PrimeTable::from_spf(limit, std::move(spf));
    if (table.bits_ != words) throw FormatMismatch("sieve cache " + path.string() + " primality bitset disagrees with spf");
    return table;
}

PrimeTable load_or_build_table(std::uint64_t limit, const std::filesystem::path& cache, const SieveOptions& options) {
    if (cache.empty()) return build_table(limit, options);
    if (std::filesystem::exists(cache)) {
        try {
            auto table = load_table_cache(cache);
            if (table.limit() == limit) return table;
            std::cerr << "goldcheck: sieve cache covers " << table.limit() << ", rebuilding for " << limit << "\n";
        } catch (const FormatMismatch& e) {
            std::cerr << "goldcheck: ignoring sieve cache: " << e.what() << "\n";
        }
    }
    auto table = build_table(limit, options);
    save_table_cache(table, cache);
    return table;
}

}  // namespace goldcheck
