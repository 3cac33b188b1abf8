#include "goldcheck/summary.hpp"

#include <algorithm>

#include "goldcheck/errors.hpp"

namespace goldcheck {

using nlohmann::ordered_json;

namespace {

bool edge_less(const EdgeCaseRecord& a, const EdgeCaseRecord& b) {
    return InstanceRef{a.n, a.k} < InstanceRef{b.n, b.k};
}

ordered_json extreme_to_json(const std::optional<WitnessExtreme>& e) {
    if (!e) return nullptr;
    return ordered_json{{"index", e->index}, {"n", e->n}, {"k", e->k}};
}

std::optional<WitnessExtreme> extreme_from_json(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    return WitnessExtreme{j.at("index").get<std::size_t>(), j.at("n").get<std::uint64_t>(), j.at("k").get<std::size_t>()};
}

ordered_json refs_to_json(const std::vector<InstanceRef>& refs) {
    auto out = ordered_json::array();
    for (const auto& r : refs) out.push_back(ordered_json{{"n", r.n}, {"k", r.k}});
    return out;
}

std::vector<InstanceRef> refs_from_json(const ordered_json& j) {
    std::vector<InstanceRef> refs;
    for (const auto& r : j) refs.push_back({r.at("n").get<std::uint64_t>(), r.at("k").get<std::size_t>()});
    return refs;
}

}  // namespace

double RangeSummary::throughput() const {
    const double seconds = std::chrono::duration<double>(elapsed).count();
    return seconds > 0 ? static_cast<double>(n_count) / seconds : 0.0;
}

void RangeSummary::record_witness(std::size_t first_index, std::uint64_t n, std::size_t k) {
    ++witness_index_histogram[histogram_bucket(first_index)];
    witness_index_sum += first_index;
    const WitnessExtreme e{first_index, n, k};
    if (!max_first_witness || beats_by_index(e, *max_first_witness)) max_first_witness = e;
    if (!max_witness_ratio || beats_by_ratio(e, *max_witness_ratio)) max_witness_ratio = e;
}

void RangeSummary::merge(const RangeSummary& other) {
    if (other.n_count == 0) {
        elapsed += other.elapsed;
        return;
    }
    if (n_count == 0) {
        n_min = other.n_min;
        n_max = other.n_max;
    } else {
        n_min = std::min(n_min, other.n_min);
        n_max = std::max(n_max, other.n_max);
    }
    n_count += other.n_count;
    instances_evaluated += other.instances_evaluated;
    vacuous_count += other.vacuous_count;
    strict_count += other.strict_count;
    equal_count += other.equal_count;
    counterexamples.insert(counterexamples.end(), other.counterexamples.begin(), other.counterexamples.end());
    anomalies.insert(anomalies.end(), other.anomalies.begin(), other.anomalies.end());
    if (other.max_first_witness && (!max_first_witness || beats_by_index(*other.max_first_witness, *max_first_witness))) {
        max_first_witness = other.max_first_witness;
    }
    if (other.max_witness_ratio && (!max_witness_ratio || beats_by_ratio(*other.max_witness_ratio, *max_witness_ratio))) {
        max_witness_ratio = other.max_witness_ratio;
    }
    witness_index_sum += other.witness_index_sum;
    for (const auto& [bucket, count] : other.witness_index_histogram) witness_index_histogram[bucket] += count;
    equality_cases.insert(equality_cases.end(), other.equality_cases.begin(), other.equality_cases.end());
    elapsed += other.elapsed;
    canonicalize();
}

void RangeSummary::canonicalize() {
    std::sort(counterexamples.begin(), counterexamples.end());
    std::sort(anomalies.begin(), anomalies.end());
    std::sort(equality_cases.begin(), equality_cases.end(), edge_less);
}

bool RangeSummary::consistent() const {
    if (instances_evaluated !=
        vacuous_count + strict_count + equal_count + counterexamples.size() + anomalies.size()) {
        return false;
    }
    if (equal_count != equality_cases.size()) return false;
    std::uint64_t histogram_total = 0;
    for (const auto& [bucket, count] : witness_index_histogram) histogram_total += count;
    return histogram_total == strict_count + equal_count;
}

bool operator==(const RangeSummary& a, const RangeSummary& b) {
    return a.n_min == b.n_min && a.n_max == b.n_max && a.n_count == b.n_count &&
           a.instances_evaluated == b.instances_evaluated && a.vacuous_count == b.vacuous_count &&
           a.strict_count == b.strict_count && a.equal_count == b.equal_count &&
           a.counterexamples == b.counterexamples && a.anomalies == b.anomalies &&
           a.max_first_witness == b.max_first_witness && a.max_witness_ratio == b.max_witness_ratio &&
           a.witness_index_sum == b.witness_index_sum && a.witness_index_histogram == b.witness_index_histogram &&
           a.equality_cases == b.equality_cases;
}

RangeSummary merged(RangeSummary a, const RangeSummary& b) {
    a.merge(b);
    return a;
}

ordered_json edge_case_to_json(const EdgeCaseRecord& record) {
    ordered_json j;
    j["n"] = record.n;
    j["k"] = record.k;
    j["pk"] = record.pk;
    j["family"] = family_name(record.family);
    j["r"] = record.r ? ordered_json(*record.r) : ordered_json(nullptr);
    j["factors"] = record.factors;
    return j;
}

EdgeCaseRecord edge_case_from_json(const ordered_json& j) {
    EdgeCaseRecord record;
    record.n = j.at("n").get<std::uint64_t>();
    record.k = j.at("k").get<std::size_t>();
    record.pk = j.at("pk").get<std::uint32_t>();
    const auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw FormatMismatch("unknown equality family " + j.at("family").dump());
    record.family = *family;
    if (!j.at("r").is_null()) record.r = j.at("r").get<unsigned>();
    record.factors = j.at("factors").get<std::vector<std::uint32_t>>();
    return record;
}

ordered_json summary_to_json(const RangeSummary& s) {
    ordered_json j;
    j["n_min"] = s.n_min;
    j["n_max"] = s.n_max;
    j["n_count"] = s.n_count;
    j["instances_evaluated"] = s.instances_evaluated;
    j["vacuous_count"] = s.vacuous_count;
    j["strict_count"] = s.strict_count;
    j["equal_count"] = s.equal_count;
    j["counterexamples"] = refs_to_json(s.counterexamples);
    j["anomalies"] = refs_to_json(s.anomalies);
    j["max_first_witness"] = extreme_to_json(s.max_first_witness);
    j["max_witness_ratio"] = extreme_to_json(s.max_witness_ratio);
    j["witness_index_sum"] = s.witness_index_sum;
    auto hist = ordered_json::array();
    for (const auto& [bucket, count] : s.witness_index_histogram) hist.push_back(ordered_json::array({bucket, count}));
    j["witness_index_histogram"] = hist;
    auto edges = ordered_json::array();
    for (const auto& e : s.equality_cases) edges.push_back(edge_case_to_json(e));
    j["equality_cases"] = edges;
    return j;
}

RangeSummary summary_from_json(const ordered_json& j) {
    RangeSummary s;
    s.n_min = j.at("n_min").get<std::uint64_t>();
    s.n_max = j.at("n_max").get<std::uint64_t>();
    s.n_count = j.at("n_count").get<std::uint64_t>();
    s.instances_evaluated = j.at("instances_evaluated").get<std::uint64_t>();
    s.vacuous_count = j.at("vacuous_count").get<std::uint64_t>();
    s.strict_count = j.at("strict_count").get<std::uint64_t>();
    s.equal_count = j.at("equal_count").get<std::uint64_t>();
    s.counterexamples = refs_from_json(j.at("counterexamples"));
    s.anomalies = refs_from_json(j.at("anomalies"));
    s.max_first_witness = extreme_from_json(j.at("max_first_witness"));
    s.max_witness_ratio = extreme_from_json(j.at("max_witness_ratio"));
    s.witness_index_sum = j.at("witness_index_sum").get<std::uint64_t>();
    for (const auto& pair : j.at("witness_index_histogram")) {
        s.witness_index_histogram[pair.at(0).get<std::size_t>()] = pair.at(1).get<std::uint64_t>();
    }
    for (const auto& e : j.at("equality_cases")) s.equality_cases.push_back(edge_case_from_json(e));
    return s;
}

}  // namespace goldcheck
