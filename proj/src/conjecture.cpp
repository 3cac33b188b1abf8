#include "goldcheck/conjecture.hpp"

#include <algorithm>

#include "goldcheck/errors.hpp"

namespace goldcheck {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string inst_str(const Instance& inst) {
    return "(n = " + std::to_string(inst.n()) + ", k = " + std::to_string(inst.k()) + ")";
}

void require_coverage(const PrimeTable& table, const Instance& inst) {
    if (inst.n() > table.limit()) {
        throw CoverageError("instance " + inst_str(inst) + " exceeds table limit " + std::to_string(table.limit()));
    }
    if (inst.k() > table.odd_prime_count() || table.odd_prime(inst.k()) != inst.pk()) {
        throw PreconditionError("instance " + inst_str(inst) + " was built against a different table");
    }
}

// lpf(n - p_i) for i = 1..k; caller has established every value is composite.
std::vector<std::uint32_t> factors_of(const PrimeTable& table, const Instance& inst) {
    std::vector<std::uint32_t> factors;
    factors.reserve(inst.k());
    for (std::size_t i = 1; i <= inst.k(); ++i) {
        factors.push_back(*largest_prime_factor(table, inst.n() - table.odd_prime(i)));
    }
    return factors;
}

}  // namespace

Instance Instance::make(const PrimeTable& table, std::uint64_t n, std::size_t k) {
    if (n % 2 != 0 || n < 6) throw PreconditionError("instance n = " + std::to_string(n) + " must be even and >= 6");
    if (k == 0) throw PreconditionError("instance k must be positive");
    if (n > table.limit()) {
        throw CoverageError("instance n = " + std::to_string(n) + " exceeds table limit " + std::to_string(table.limit()));
    }
    const auto pk = table.odd_prime(k);
    if (pk >= n) {
        throw PreconditionError("instance (n = " + std::to_string(n) + ", k = " + std::to_string(k) +
                                ") violates n > p_k = " + std::to_string(pk));
    }
    return Instance(n, k, pk);
}

std::string outcome_name(const InstanceOutcome& outcome) {
    return std::visit(overloaded{
                          [](const outcome::Vacuous&) { return std::string("VACUOUS"); },
                          [](const outcome::WitnessStrict&) { return std::string("WITNESS_STRICT"); },
                          [](const outcome::WitnessEqual&) { return std::string("WITNESS_EQUAL"); },
                          [](const outcome::CounterexampleCandidate&) { return std::string("COUNTEREXAMPLE_CANDIDATE"); },
                          [](const outcome::AnomalyUnit&) { return std::string("ANOMALY_UNIT"); },
                      },
                      outcome);
}

std::string family_name(EqualityFamily family) {
    switch (family) {
        case EqualityFamily::PowerOf3Plus3: return "POWER_OF_3_PLUS_3";
        case EqualityFamily::Known30k2: return "KNOWN_30_2";
        case EqualityFamily::Novel: return "NOVEL";
    }
    return "NOVEL";
}

std::optional<EqualityFamily> parse_family(const std::string& name) {
    if (name == "POWER_OF_3_PLUS_3") return EqualityFamily::PowerOf3Plus3;
    if (name == "KNOWN_30_2") return EqualityFamily::Known30k2;
    if (name == "NOVEL") return EqualityFamily::Novel;
    return std::nullopt;
}

EqualityFamily equality_family(std::uint64_t n, std::size_t k, std::optional<unsigned>& r) {
    r.reset();
    if (k == 1 && n > 3) {
        std::uint64_t v = n - 3;
        unsigned e = 0;
        while (v % 3 == 0) {
            v /= 3;
            ++e;
        }
        if (v == 1 && e > 1) {
            r = e;
            return EqualityFamily::PowerOf3Plus3;
        }
    }
    if (n == 30 && k == 2) return EqualityFamily::Known30k2;
    return EqualityFamily::Novel;
}

InstanceOutcome evaluate_instance(const PrimeTable& table, const Instance& inst) {
    require_coverage(table, inst);
    const std::uint64_t n = inst.n();
    std::vector<std::uint32_t> factors;
    factors.reserve(inst.k());
    for (std::size_t i = 1; i <= inst.k(); ++i) {
        const std::uint64_t v = n - table.odd_prime(i);
        if (v == 1) return outcome::AnomalyUnit{i};
        if (table.is_prime(v)) return outcome::Vacuous{i, v};
        factors.push_back(*largest_prime_factor(table, v));
    }

    const std::uint32_t pk = inst.pk();
    const auto top = *std::max_element(factors.begin(), factors.end());
    if (top > pk) {
        const auto it = std::find_if(factors.begin(), factors.end(), [pk](std::uint32_t f) { return f > pk; });
        return outcome::WitnessStrict{static_cast<std::size_t>(it - factors.begin()) + 1, *it};
    }
    if (top == pk) {
        const auto it = std::find(factors.begin(), factors.end(), pk);
        return outcome::WitnessEqual{static_cast<std::size_t>(it - factors.begin()) + 1};
    }
    return outcome::CounterexampleCandidate{std::move(factors)};
}

std::optional<std::size_t> first_witness_index(const PrimeTable& table, const Instance& inst) {
    const auto result = evaluate_instance(table, inst);
    if (!std::holds_alternative<outcome::WitnessStrict>(result) && !std::holds_alternative<outcome::WitnessEqual>(result)) {
        return std::nullopt;
    }
    for (std::size_t i = 1; i <= inst.k(); ++i) {
        if (*largest_prime_factor(table, inst.n() - table.odd_prime(i)) >= inst.pk()) return i;
    }
    return std::nullopt;
}

std::optional<EdgeCaseRecord> classify_equality(const PrimeTable& table, const Instance& inst,
                                                const InstanceOutcome& outcome) {
    if (evaluate_instance(table, inst) != outcome) {
        throw PreconditionError("outcome " + outcome_name(outcome) + " does not belong to instance " + inst_str(inst));
    }
    if (!std::holds_alternative<outcome::WitnessEqual>(outcome)) return std::nullopt;

    EdgeCaseRecord record;
    record.n = inst.n();
    record.k = inst.k();
    record.pk = inst.pk();
    record.factors = factors_of(table, inst);
    record.family = equality_family(inst.n(), inst.k(), record.r);
    return record;
}

LemmaTrace construct_lemma_prime(const PrimeTable& table, const Instance& inst, const InstanceOutcome& outcome) {
    const bool strict = std::holds_alternative<outcome::WitnessStrict>(outcome);
    const bool equal = std::holds_alternative<outcome::WitnessEqual>(outcome);
    if (!strict && !equal) {
        throw PreconditionError("lemma requires a witness outcome, got " + outcome_name(outcome));
    }
    if (evaluate_instance(table, inst) != outcome) {
        throw PreconditionError("outcome " + outcome_name(outcome) + " does not belong to instance " + inst_str(inst));
    }

    const std::uint64_t n = inst.n();
    const std::uint64_t pk = inst.pk();
    LemmaTrace trace{inst, outcome, 0, 0, std::nullopt, 0, false};

    if (strict) {
        const auto& w = std::get<outcome::WitnessStrict>(outcome);
        const std::uint64_t v = n - table.odd_prime(w.i);
        const std::string at = " at " + inst_str(inst);
        if (v % w.factor != 0) throw ProofViolation("q = " + std::to_string(w.factor) + " divides n - p_i = " + std::to_string(v) + at);
        if (!(w.factor > pk)) throw ProofViolation("q = " + std::to_string(w.factor) + " > p_k = " + std::to_string(pk) + at);
        if (!(w.factor < n)) throw ProofViolation("q = " + std::to_string(w.factor) + " < n = " + std::to_string(n) + at);
        trace.i = w.i;
        trace.value = v;
        trace.produced_prime = w.factor;
        trace.used_bertrand = false;
        return trace;
    }

    const auto& w = std::get<outcome::WitnessEqual>(outcome);
    const std::uint64_t v = n - table.odd_prime(w.i);
    const std::string at = " at " + inst_str(inst);
    if (v % pk != 0) {
        throw ProofViolation("p_k = " + std::to_string(pk) + " divides n - p_i = " + std::to_string(v) + at);
    }
    const std::uint64_t m = v / pk;
    if (m % 2 == 0) throw ProofViolation("m = " + std::to_string(m) + " is odd" + at);
    if (m < 3) throw ProofViolation("m = " + std::to_string(m) + " >= 3" + at);
    if (!(3 * pk <= v)) throw ProofViolation("3*p_k = " + std::to_string(3 * pk) + " <= n - p_i = " + std::to_string(v) + at);
    if (!(v < n)) throw ProofViolation("n - p_i = " + std::to_string(v) + " < n = " + std::to_string(n) + at);

    std::uint64_t next = 0;
    try {
        next = next_prime(table, pk);
    } catch (const CoverageError&) {
        // The table reaches n, so a missing successor already breaks p_{k+1} < n.
        throw ProofViolation("p_{k+1} < n = " + std::to_string(n) + " (no prime above p_k within the table)" + at);
    }
    if (!(next < 2 * pk)) {
        throw ProofViolation("p_{k+1} = " + std::to_string(next) + " < 2*p_k = " + std::to_string(2 * pk) + at);
    }
    if (!(next < n)) throw ProofViolation("p_{k+1} = " + std::to_string(next) + " < n = " + std::to_string(n) + at);

    trace.i = w.i;
    trace.value = v;
    trace.m = m;
    trace.produced_prime = static_cast<std::uint32_t>(next);
    trace.used_bertrand = true;
    return trace;
}

DescentTrace goldbach_decompose(const PrimeTable& table, std::uint64_t n, DescentMode mode) {
    if (n % 2 != 0 || n < 6) throw PreconditionError("goldbach_decompose needs an even n >= 6, got " + std::to_string(n));
    if (n > table.limit()) {
        throw CoverageError("n = " + std::to_string(n) + " exceeds table limit " + std::to_string(table.limit()));
    }

    DescentTrace trace;
    trace.n = n;
    trace.max_k = table.odd_primes_below(n);
    for (std::size_t i = 1; i <= trace.max_k; ++i) {
        const std::uint32_t p = table.odd_prime(i);
        if (table.is_prime(n - p)) {
            trace.i = i;
            trace.p = p;
            trace.q = n - p;
            break;
        }
    }

    if (trace.i == 0) {
        // No i <= K(n) works, so (n, K(n)) is nonvacuous. Either the conjecture
        // fails there, or the lemma yields a prime in (p_K, n), contradicting the
        // choice of K. Both are extraordinary and reported, never swallowed.
        const auto inst = Instance::make(table, n, trace.max_k);
        const auto result = evaluate_instance(table, inst);
        if (std::holds_alternative<outcome::WitnessStrict>(result) || std::holds_alternative<outcome::WitnessEqual>(result)) {
            const auto lemma = construct_lemma_prime(table, inst, result);
            throw GoldbachCounterexample(n, "no decomposition; lemma produced prime " + std::to_string(lemma.produced_prime) +
                                                " in (p_K = " + std::to_string(inst.pk()) +
                                                ", n), contradicting maximality of K = " + std::to_string(trace.max_k));
        }
        throw GoldbachCounterexample(n, "no decomposition; instance (n, K = " + std::to_string(trace.max_k) + ") is " +
                                            outcome_name(result));
    }

    if (mode == DescentMode::Verify) {
        for (std::size_t k = 1; k < trace.i; ++k) {
            const auto inst = Instance::make(table, n, k);
            const auto result = evaluate_instance(table, inst);
            if (!std::holds_alternative<outcome::WitnessStrict>(result) && !std::holds_alternative<outcome::WitnessEqual>(result)) {
                throw ProofViolation("descent step at " + inst_str(inst) + " expected a witness, got " + outcome_name(result));
            }
            const auto lemma = construct_lemma_prime(table, inst, result);
            const std::uint32_t successor = table.odd_prime(k + 1);
            if (!(successor <= lemma.produced_prime && successor < n)) {
                throw ProofViolation("p_{k+1} = " + std::to_string(successor) + " <= produced prime " +
                                     std::to_string(lemma.produced_prime) + " < n at " + inst_str(inst));
            }
            trace.steps.push_back({k, inst.pk(), lemma.produced_prime, lemma.used_bertrand});
        }
    }
    return trace;
}

}  // namespace goldcheck
