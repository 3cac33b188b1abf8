#include "goldcheck/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "goldcheck/errors.hpp"

namespace goldcheck {

using nlohmann::ordered_json;

namespace {

constexpr const char* kFormatName = "goldcheck-checkpoint";

// Bitmap as hex, bit b of the string's nibble stream = block b.
std::string bitmap_to_hex(const std::vector<bool>& bits) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string hex((bits.size() + 3) / 4, '0');
    for (std::size_t b = 0; b < bits.size(); ++b) {
        if (!bits[b]) continue;
        auto& c = hex[b / 4];
        const int value = (c <= '9' ? c - '0' : c - 'a' + 10) | (1 << (b % 4));
        c = digits[value];
    }
    return hex;
}

std::vector<bool> bitmap_from_hex(const std::string& hex, std::uint64_t count) {
    if (hex.size() != (count + 3) / 4) throw FormatMismatch("checkpoint bitmap length does not match block count");
    std::vector<bool> bits(count, false);
    for (std::uint64_t b = 0; b < count; ++b) {
        const char c = hex[b / 4];
        int value = 0;
        if (c >= '0' && c <= '9') value = c - '0';
        else if (c >= 'a' && c <= 'f') value = c - 'a' + 10;
        else throw FormatMismatch("checkpoint bitmap has a non-hex digit");
        bits[b] = (value >> (b % 4)) & 1;
    }
    return bits;
}

}  // namespace

std::uint64_t CheckpointState::blocks_done() const {
    std::uint64_t done = 0;
    for (bool b : completed) done += b;
    return done;
}

std::uint64_t CheckpointState::next_n() const {
    for (std::uint64_t b = 0; b < completed.size(); ++b) {
        if (!completed[b]) return n_min + 2 * block_evens * b;
    }
    return n_max + 2;
}

CheckpointState fresh_checkpoint(const RangeJob& job) {
    CheckpointState state;
    state.n_min = job.n_min;
    state.n_max = job.n_max;
    state.table_limit = job.table_limit;
    state.block_evens = job.block_evens;
    state.completed.assign(job.block_count(), false);
    return state;
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointState& state) {
    ordered_json j;
    j["format"] = kFormatName;
    j["version"] = std::to_string(kCheckpointMajor) + "." + std::to_string(kCheckpointMinor);
    j["job"] = ordered_json{{"n_min", state.n_min},
                            {"n_max", state.n_max},
                            {"table_limit", state.table_limit},
                            {"block_evens", state.block_evens}};
    j["blocks_total"] = state.completed.size();
    j["blocks_done"] = state.blocks_done();
    j["next_n"] = state.next_n();
    j["completed"] = bitmap_to_hex(state.completed);
    j["elapsed_ns"] = static_cast<std::int64_t>(state.partial.elapsed.count());
    j["partial"] = summary_to_json(state.partial);

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot open checkpoint for writing: " + tmp.string());
        out << j.dump(1) << '\n';
        if (!out.flush()) throw IoError("failed writing checkpoint " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

CheckpointState load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatMismatch("checkpoint " + path.string() + " is not valid JSON: " + e.what());
    }

    try {
        if (j.value("format", "") != kFormatName) throw FormatMismatch(path.string() + " is not a goldcheck checkpoint");
        const auto version = j.at("version").get<std::string>();
        const int major = std::stoi(version.substr(0, version.find('.')));
        if (major != kCheckpointMajor) {
            throw FormatMismatch("checkpoint " + path.string() + " has version " + version + ", this build reads " +
                                 std::to_string(kCheckpointMajor) + ".x");
        }
        CheckpointState state;
        const auto& job = j.at("job");
        state.n_min = job.at("n_min").get<std::uint64_t>();
        state.n_max = job.at("n_max").get<std::uint64_t>();
        state.table_limit = job.at("table_limit").get<std::uint64_t>();
        state.block_evens = job.at("block_evens").get<std::uint64_t>();
        state.completed = bitmap_from_hex(j.at("completed").get<std::string>(), j.at("blocks_total").get<std::uint64_t>());
        state.partial = summary_from_json(j.at("partial"));
        state.partial.elapsed = std::chrono::nanoseconds(j.value("elapsed_ns", std::int64_t{0}));
        return state;
    } catch (const nlohmann::json::exception& e) {
        throw FormatMismatch("checkpoint " + path.string() + " is malformed: " + e.what());
    } catch (const std::invalid_argument&) {
        throw FormatMismatch("checkpoint " + path.string() + " has an unreadable version string");
    }
}

void check_resumable(const CheckpointState& state, const RangeJob& job) {
    std::ostringstream diff;
    auto compare = [&](const char* name, std::uint64_t saved, std::uint64_t wanted) {
        if (saved != wanted) diff << "\n  " << name << ": checkpoint has " << saved << ", job has " << wanted;
    };
    compare("n_min", state.n_min, job.n_min);
    compare("n_max", state.n_max, job.n_max);
    compare("table_limit", state.table_limit, job.table_limit);
    compare("block_evens", state.block_evens, job.block_evens);
    if (state.completed.size() != job.block_count()) {
        compare("blocks_total", state.completed.size(), job.block_count());
    }
    const auto text = diff.str();
    if (!text.empty()) throw FormatMismatch("refusing to resume: checkpoint parameters differ from the job:" + text);
}

}  // namespace goldcheck
