#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace goldcheck {

// Every failure the engine reports derives from Error; the CLI maps the
// concrete type onto its exit-code contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration detected before any work starts (bad limit, bad job).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A query argument lies outside the domain of the operation.
class RangeError : public Error {
public:
    using Error::Error;
};

// The prime table does not cover the requested value.
class CoverageError : public Error {
public:
    using Error::Error;
};

// Caller broke a documented precondition (invalid instance, wrong outcome kind).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A step of the constructive lemma failed. Carries the inequality that broke.
class ProofViolation : public Error {
public:
    explicit ProofViolation(std::string inequality)
        : Error("proof step violated: " + inequality), inequality_(std::move(inequality)) {}

    const std::string& inequality() const noexcept { return inequality_; }

private:
    std::string inequality_;
};

// Goldbach descent found no decomposition and the contradiction branch fired.
class GoldbachCounterexample : public Error {
public:
    GoldbachCounterexample(std::uint64_t n, const std::string& detail)
        : Error("Goldbach counterexample event at n = " + std::to_string(n) + ": " + detail), n_(n) {}

    std::uint64_t n() const noexcept { return n_; }

private:
    std::uint64_t n_;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Checkpoint or cache file exists but cannot be used for this run.
class FormatMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace goldcheck
