#include "goldcheck/cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "goldcheck/checkpoint.hpp"
#include "goldcheck/conjecture.hpp"
#include "goldcheck/errors.hpp"
#include "goldcheck/report.hpp"
#include "goldcheck/search.hpp"
#include "goldcheck/sieve.hpp"
#include "trial_division.hpp"

namespace goldcheck::cli {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) {
    g_interrupted.store(true);
}

struct CliConfig {
    std::string subcommand;
    std::string n_min = "6";
    std::string n_max;
    std::string limit;
    int workers = 0;
    std::string checkpoint;
    bool resume = false;
    std::string checkpoint_interval = "1000000";
    std::string block_size = "10000";
    std::string format = "ndjson";
    std::string output;
    std::string manifest;
    bool fail_fast = false;
    std::string sieve_cache;
    std::string segment_size = "65536";
    // goldbach / lemma
    std::string n;
    std::size_t k = 0;
    bool fast = false;
    // selftest
    std::string samples = "100000";
    std::uint64_t seed = 20240501;
};

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, const std::string& text) {
    std::uint64_t value = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (value > std::numeric_limits<std::uint64_t>::max() / base) throw ConfigError("number too large: " + text);
        value *= base;
    }
    return value;
}

std::uint64_t parse_plain(const std::string& digits, const std::string& text) {
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("not a non-negative integer: '" + text + "'");
    }
    try {
        return std::stoull(digits);
    } catch (const std::out_of_range&) {
        throw ConfigError("number too large: " + text);
    }
}

int resolve_workers(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("GOLDCHECK_WORKERS")) {
        const auto value = parse_plain(env, env);
        if (value == 0 || value > 4096) throw ConfigError("GOLDCHECK_WORKERS must be in [1, 4096], got " + std::string(env));
        return static_cast<int>(value);
    }
    return default_worker_count();
}

// Routes primary output to --output or stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : path_(path), out_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw IoError("cannot open output file " + path);
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }
    void close() {
        out_->flush();
        if (!*out_) throw IoError("failed writing output" + (path_.empty() ? std::string() : " to " + path_));
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* out_;
};

SieveOptions sieve_options(const CliConfig& cfg, int workers) {
    SieveOptions options;
    options.segment_size = parse_count(cfg.segment_size);
    if (options.segment_size == 0) throw ConfigError("--segment-size must be positive");
    options.threads = workers;
    return options;
}

void check_table_fits(std::uint64_t limit) {
    if (limit < 6) throw ConfigError("table limit " + std::to_string(limit) + " is below 6");
    if (table_footprint(limit) > SieveOptions{}.memory_ceiling) {
        throw ConfigError("table limit " + std::to_string(limit) + " exceeds the memory ceiling");
    }
    if (limit >= 0xffffffffull) throw ConfigError("table limit " + std::to_string(limit) + " exceeds 4294967294");
}

int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    RangeJob job;
    job.n_min = parse_count(cfg.n_min);
    job.n_max = parse_count(cfg.n_max);
    job.table_limit = cfg.limit.empty() ? job.n_max : parse_count(cfg.limit);
    job.worker_count = resolve_workers(cfg.workers);
    job.checkpoint_interval = parse_count(cfg.checkpoint_interval);
    job.block_evens = parse_count(cfg.block_size);
    job.fail_fast = cfg.fail_fast;
    const auto format = parse_format(cfg.format);
    if (cfg.resume && cfg.checkpoint.empty()) throw ConfigError("--resume requires --checkpoint");
    job.validate();
    check_table_fits(job.table_limit);

    const auto started = std::chrono::system_clock::now();
    const auto table = load_or_build_table(job.table_limit, cfg.sieve_cache, sieve_options(cfg, job.worker_count));

    RunOptions options;
    options.checkpoint = cfg.checkpoint;
    options.resume = cfg.resume;
    g_interrupted.store(false);
    auto previous = std::signal(SIGINT, on_sigint);
    options.stop_requested = [](std::uint64_t) { return g_interrupted.load(); };
    RangeRun run;
    try {
        run = run_range(table, job, options);
    } catch (...) {
        std::signal(SIGINT, previous);
        throw;
    }
    std::signal(SIGINT, previous);

    if (run.status == RunStatus::Interrupted) {
        err << "goldcheck: interrupted after " << run.blocks_done << "/" << run.blocks_total << " blocks; next n = "
            << run.next_n;
        if (!cfg.checkpoint.empty()) err << "; resume with --checkpoint " << cfg.checkpoint << " --resume";
        err << "\n";
        return kInterrupted;
    }

    const auto& s = run.summary;
    if (cfg.output.empty()) {
        emit_records(s, format, out);
    } else {
        emit_records(s, format, std::filesystem::path(cfg.output));
    }
    const auto finished = std::chrono::system_clock::now();
    const auto manifest = make_manifest(job, s, started, finished);
    if (!cfg.manifest.empty()) {
        std::ofstream m(cfg.manifest, std::ios::trunc);
        m << manifest_to_json(manifest).dump(2) << '\n';
        if (!m.flush()) throw IoError("cannot write manifest " + cfg.manifest);
    }

    std::size_t novel = 0;
    for (const auto& e : s.equality_cases) {
        if (e.family == EqualityFamily::Novel) {
            ++novel;
            err << "goldcheck: FINDING: NOVEL equality case n = " << e.n << ", k = " << e.k << "\n";
        }
    }
    for (const auto& c : s.counterexamples) {
        err << "goldcheck: COUNTEREXAMPLE CANDIDATE n = " << c.n << ", k = " << c.k << "\n";
    }
    for (const auto& a : s.anomalies) err << "goldcheck: ANOMALY (unit value) n = " << a.n << ", k = " << a.k << "\n";
    err << "goldcheck: verified even n in [" << job.n_min << ", " << (run.status == RunStatus::Complete ? job.n_max : run.next_n - 2)
        << "]: " << s.instances_evaluated << " instances, " << s.strict_count << " strict, " << s.equal_count
        << " equality (" << novel << " novel), " << s.counterexamples.size() << " counterexample candidates, "
        << s.anomalies.size() << " anomalies\n";
    err << "goldcheck: digest " << manifest.summary_digest << ", " << std::chrono::duration<double>(s.elapsed).count()
        << " s, " << static_cast<std::uint64_t>(s.throughput()) << " n/s\n";

    if (job.fail_fast && !s.counterexamples.empty()) return kCounterexample;
    if (job.fail_fast && !s.anomalies.empty()) return kAnomaly;
    return kOk;
}

int cmd_edge_cases(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto n_max = parse_count(cfg.n_max);
    const auto limit = cfg.limit.empty() ? std::max<std::uint64_t>(n_max, 6) : parse_count(cfg.limit);
    const auto format = parse_format(cfg.format);
    const int workers = resolve_workers(cfg.workers);
    if (n_max > limit) throw ConfigError("--max " + std::to_string(n_max) + " exceeds --limit " + std::to_string(limit));
    check_table_fits(limit);

    const auto table = load_or_build_table(limit, cfg.sieve_cache, sieve_options(cfg, workers));
    const auto records = enumerate_edge_cases(table, n_max, workers);
    Sink sink(cfg.output, out);
    emit_edge_cases(records, format, sink.stream());
    sink.close();

    std::size_t novel = 0;
    for (const auto& e : records) {
        if (e.family == EqualityFamily::Novel) {
            ++novel;
            err << "goldcheck: FINDING: NOVEL equality case n = " << e.n << ", k = " << e.k << "\n";
        }
    }
    err << "goldcheck: " << records.size() << " equality cases with n <= " << n_max << " (" << novel << " novel)\n";
    return kOk;
}

int cmd_stats(const CliConfig& cfg, std::ostream& out, std::ostream&) {
    const auto n_max = parse_count(cfg.n_max);
    const auto limit = cfg.limit.empty() ? std::max<std::uint64_t>(n_max, 6) : parse_count(cfg.limit);
    const int workers = resolve_workers(cfg.workers);
    if (n_max > limit) throw ConfigError("--max " + std::to_string(n_max) + " exceeds --limit " + std::to_string(limit));
    check_table_fits(limit);

    const auto table = load_or_build_table(limit, cfg.sieve_cache, sieve_options(cfg, workers));
    const auto stats = witness_statistics(table, n_max, workers);

    nlohmann::ordered_json j;
    j["n_max"] = n_max;
    j["witnessed_instances"] = stats.witnessed_instances;
    j["first_witness_index_sum"] = stats.index_sum;
    j["mean_first_witness_index"] = stats.mean_index();
    auto extreme = [](const std::optional<WitnessExtreme>& e) -> nlohmann::ordered_json {
        if (!e) return nullptr;
        return {{"index", e->index}, {"n", e->n}, {"k", e->k}};
    };
    j["max_first_witness"] = extreme(stats.max_index);
    j["max_first_witness_ratio"] = extreme(stats.max_ratio);
    auto hist = nlohmann::ordered_json::array();
    for (const auto& [bucket, count] : stats.histogram) hist.push_back({bucket, count});
    j["histogram"] = hist;

    Sink sink(cfg.output, out);
    sink.stream() << j.dump() << '\n';
    sink.close();
    return kOk;
}

int cmd_goldbach(const CliConfig& cfg, std::ostream& out, std::ostream&) {
    const auto n = parse_count(cfg.n);
    const auto limit = cfg.limit.empty() ? n : parse_count(cfg.limit);
    if (n % 2 != 0 || n < 6) throw ConfigError("--n must be an even integer >= 6, got " + std::to_string(n));
    if (n > limit) throw ConfigError("--n " + std::to_string(n) + " exceeds --limit " + std::to_string(limit));
    check_table_fits(limit);

    const auto table = load_or_build_table(limit, cfg.sieve_cache, sieve_options(cfg, resolve_workers(cfg.workers)));
    const auto trace = goldbach_decompose(table, n, cfg.fast ? DescentMode::Fast : DescentMode::Verify);
    Sink sink(cfg.output, out);
    sink.stream() << "(" << trace.p << ", " << trace.q << ")\n";
    render_descent_trace(trace, sink.stream());
    sink.close();
    return kOk;
}

int cmd_lemma(const CliConfig& cfg, std::ostream& out, std::ostream&) {
    const auto n = parse_count(cfg.n);
    const auto limit = cfg.limit.empty() ? n : parse_count(cfg.limit);
    if (n % 2 != 0 || n < 6) throw ConfigError("--n must be an even integer >= 6, got " + std::to_string(n));
    if (cfg.k == 0) throw ConfigError("--k must be positive");
    if (n > limit) throw ConfigError("--n " + std::to_string(n) + " exceeds --limit " + std::to_string(limit));
    check_table_fits(limit);

    const auto table = load_or_build_table(limit, cfg.sieve_cache, sieve_options(cfg, resolve_workers(cfg.workers)));
    const auto inst = Instance::make(table, n, cfg.k);
    const auto result = evaluate_instance(table, inst);
    Sink sink(cfg.output, out);
    sink.stream() << "outcome: " << outcome_name(result) << "\n";
    sink.close();
    const auto trace = construct_lemma_prime(table, inst, result);
    render_proof_trace(trace, sink.stream());
    sink.close();
    return kOk;
}

int cmd_selftest(const CliConfig& cfg, std::ostream& out, std::ostream&) {
    const auto limit = cfg.limit.empty() ? std::uint64_t{1'000'000} : parse_count(cfg.limit);
    const auto samples = parse_count(cfg.samples);
    check_table_fits(limit);
    const int workers = resolve_workers(cfg.workers);
    const auto table = build_table(limit, sieve_options(cfg, workers));
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) out << ": " << detail;
        out << "\n";
        failures += !ok;
    };

    {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<std::uint64_t> dist(2, limit);
        std::uint64_t bad = 0, first_bad = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
            const auto x = dist(rng);
            if (table.spf(x) != oracle::smallest_factor(x) && bad++ == 0) first_bad = x;
        }
        report("spf vs trial division", bad == 0,
               std::to_string(samples) + " samples" + (bad ? ", first mismatch at " + std::to_string(first_bad) : ""));
    }
    {
        const auto expected = oracle::prime_count(limit);
        report("prime count", table.prime_count() == expected,
               "pi(" + std::to_string(limit) + ") = " + std::to_string(table.prime_count()) + ", oracle " +
                   std::to_string(expected));
    }
    report("segmented sieve vs serial reference", table == build_table_reference(limit), "");
    {
        std::uint64_t checked = 0, bad = 0;
        for (auto p : table.odd_primes()) {
            if (2 * std::uint64_t{p} > limit) break;
            ++checked;
            if (next_prime(table, p) >= 2 * std::uint64_t{p}) ++bad;
        }
        report("Bertrand scan", bad == 0, std::to_string(checked) + " primes p <= limit/2");
    }
    {
        const std::uint64_t upper = std::min<std::uint64_t>(10'000, limit - limit % 2);
        RangeJob job;
        job.n_min = 6;
        job.n_max = upper;
        job.table_limit = limit;
        job.worker_count = workers;
        const auto engine = verify_range(table, job);
        const auto brute = oracle::range_summary(6, upper);
        report("range summary vs brute force", engine == brute, "[6, " + std::to_string(upper) + "]");
        std::uint64_t ok = 0;
        for (std::uint64_t n = 6; n <= upper; n += 2) {
            const auto t = goldbach_decompose(table, n, DescentMode::Verify);
            ok += t.p + t.q == n && oracle::is_prime(t.p) && oracle::is_prime(t.q);
        }
        report("Goldbach descent", ok == (upper - 6) / 2 + 1, "[6, " + std::to_string(upper) + "]");
    }
    return failures == 0 ? kOk : kCheckFailed;
}

void add_table_flags(CLI::App* cmd, CliConfig& cfg) {
    cmd->add_option("--limit", cfg.limit, "Prime table limit (default: the largest n needed)");
    cmd->add_option("--workers", cfg.workers, "Worker threads (default: $GOLDCHECK_WORKERS, else all cores)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sieve-cache", cfg.sieve_cache, "Binary sieve cache file; loaded when it matches, else rebuilt");
    cmd->add_option("--segment-size", cfg.segment_size, "Sieve segment size in integers")->capture_default_str();
}

}  // namespace

std::uint64_t parse_count(const std::string& text) {
    if (const auto caret = text.find('^'); caret != std::string::npos) {
        return checked_pow(parse_plain(text.substr(0, caret), text), parse_plain(text.substr(caret + 1), text), text);
    }
    if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
        return parse_plain(text.substr(0, e), text) * checked_pow(10, parse_plain(text.substr(e + 1), text), text);
    }
    return parse_plain(text, text);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"goldcheck: exhaustive verifier for the largest-prime-factor conjecture behind Goldbach"};
    app.require_subcommand(1);
    app.set_version_flag("--version", GOLDCHECK_VERSION);

    auto* verify = app.add_subcommand("verify", "Verify every nonvacuous (n, k) for even n in [min, max]");
    verify->add_option("--min", cfg.n_min, "Smallest even n (>= 6)")->capture_default_str();
    verify->add_option("--max", cfg.n_max, "Largest even n")->required();
    add_table_flags(verify, cfg);
    verify->add_option("--checkpoint", cfg.checkpoint, "Checkpoint file written at block boundaries");
    verify->add_flag("--resume", cfg.resume, "Continue from --checkpoint if it exists");
    verify->add_option("--checkpoint-interval", cfg.checkpoint_interval, "Even n per checkpoint")->capture_default_str();
    verify->add_option("--block-size", cfg.block_size, "Even n per work block")->capture_default_str();
    verify->add_option("--format", cfg.format, "Record format")
        ->check(CLI::IsMember({"ndjson", "csv"}))
        ->capture_default_str();
    verify->add_option("--output", cfg.output, "Record file (default: stdout)");
    verify->add_option("--manifest", cfg.manifest, "Write a JSON run manifest with the summary digest");
    verify->add_flag("--fail-fast", cfg.fail_fast, "Stop with a nonzero exit on a counterexample or anomaly");

    auto* edges = app.add_subcommand("edge-cases", "List every equality case with n <= max");
    edges->add_option("--max", cfg.n_max, "Largest n")->required();
    add_table_flags(edges, cfg);
    edges->add_option("--format", cfg.format, "Record format")
        ->check(CLI::IsMember({"ndjson", "csv"}))
        ->capture_default_str();
    edges->add_option("--output", cfg.output, "Output file (default: stdout)");

    auto* stats = app.add_subcommand("stats", "First-witness index statistics for n <= max");
    stats->add_option("--max", cfg.n_max, "Largest n")->required();
    add_table_flags(stats, cfg);
    stats->add_option("--output", cfg.output, "Output file (default: stdout)");

    auto* goldbach = app.add_subcommand("goldbach", "Decompose one even n and print the descent trace");
    goldbach->add_option("--n", cfg.n, "Even n >= 6")->required();
    goldbach->add_flag("--fast", cfg.fast, "Skip the lemma descent, only find the decomposition");
    add_table_flags(goldbach, cfg);
    goldbach->add_option("--output", cfg.output, "Output file (default: stdout)");

    auto* lemma = app.add_subcommand("lemma", "Evaluate (n, k) and print the instantiated lemma trace");
    lemma->add_option("--n", cfg.n, "Even n >= 6")->required();
    lemma->add_option("--k", cfg.k, "Odd prime index k >= 1")->required();
    add_table_flags(lemma, cfg);
    lemma->add_option("--output", cfg.output, "Output file (default: stdout)");

    auto* selftest = app.add_subcommand("selftest", "Cross-check the engine against trial-division oracles");
    selftest->add_option("--limit", cfg.limit, "Table limit for the checks (default 1000000)");
    selftest->add_option("--samples", cfg.samples, "Random spf samples")->capture_default_str();
    selftest->add_option("--seed", cfg.seed, "Sample seed")->capture_default_str();
    selftest->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
    selftest->add_option("--segment-size", cfg.segment_size, "Sieve segment size in integers")->capture_default_str();

    std::vector<const char*> argv{"goldcheck"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(cfg, out, err);
        if (edges->parsed()) return cmd_edge_cases(cfg, out, err);
        if (stats->parsed()) return cmd_stats(cfg, out, err);
        if (goldbach->parsed()) return cmd_goldbach(cfg, out, err);
        if (lemma->parsed()) return cmd_lemma(cfg, out, err);
        if (selftest->parsed()) return cmd_selftest(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "goldcheck: usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "goldcheck: usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const CoverageError& e) {
        err << "goldcheck: coverage error: " << e.what() << "\n";
        return kCoverage;
    } catch (const RangeError& e) {
        err << "goldcheck: coverage error: " << e.what() << "\n";
        return kCoverage;
    } catch (const IoError& e) {
        err << "goldcheck: I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const FormatMismatch& e) {
        err << "goldcheck: " << e.what() << "\n";
        return kIo;
    } catch (const ProofViolation& e) {
        err << "goldcheck: PROOF VIOLATION: " << e.what() << "\n";
        return kProofViolation;
    } catch (const GoldbachCounterexample& e) {
        err << "goldcheck: " << e.what() << "\n";
        return kProofViolation;
    } catch (const std::exception& e) {
        err << "goldcheck: error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace goldcheck::cli
