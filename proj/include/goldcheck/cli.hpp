#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace goldcheck::cli {

// Process exit codes. Part of the tool's external contract.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,       // selftest mismatch or unexpected internal error
    kUsage = 2,             // bad flags or unsatisfiable configuration
    kCoverage = 3,          // value outside the prime table
    kIo = 4,                // unreadable/unwritable file, checkpoint or cache mismatch
    kCounterexample = 5,    // counterexample candidate found (--fail-fast only)
    kAnomaly = 6,           // unit anomaly found (--fail-fast only)
    kProofViolation = 7,    // lemma step failed or Goldbach descent found no decomposition
    kInterrupted = 130,     // SIGINT; checkpoint written when enabled
};

// Accepts plain decimal ("1000000"), powers ("10^6") and exact scientific ("1e6").
std::uint64_t parse_count(const std::string& text);

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace goldcheck::cli
