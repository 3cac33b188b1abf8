#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "goldcheck/search.hpp"
#include "goldcheck/summary.hpp"

namespace goldcheck {

// Readers accept any checkpoint with the same major version.
inline constexpr int kCheckpointMajor = 1;
inline constexpr int kCheckpointMinor = 0;

struct CheckpointState {
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    std::uint64_t table_limit = 0;
    std::uint64_t block_evens = 0;
    std::vector<bool> completed;
    // Merge of every completed block.
    RangeSummary partial;

    std::uint64_t blocks_done() const;
    std::uint64_t next_n() const;
};

CheckpointState fresh_checkpoint(const RangeJob& job);

// Written to a sibling temp file and renamed, so an existing checkpoint survives
// a failed write. Throws IoError.
void save_checkpoint(const std::filesystem::path& path, const CheckpointState& state);

// Throws IoError when unreadable and FormatMismatch for foreign or newer-major files.
CheckpointState load_checkpoint(const std::filesystem::path& path);

// Throws FormatMismatch naming every parameter that differs from `job`.
void check_resumable(const CheckpointState& state, const RangeJob& job);

}  // namespace goldcheck
