#include "certint/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

namespace certint::report {

namespace {

template <class T>
json optional_json(const std::optional<T>& v)
{
    return v ? to_json(*v) : json(nullptr);
}

json optional_real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }

} // namespace

json real(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

json to_json(const Interval& x)
{
    if (x.is_empty()) {
        return json{{"empty", true}};
    }
    return json{{"lo", real(x.lo())}, {"hi", real(x.hi())}};
}

json to_json(const DarbouxEnclosure& enc)
{
    json j;
    j["lower_integral"] = to_json(enc.lower_integral);
    j["upper_integral"] = to_json(enc.upper_integral);
    j["partition_size"] = enc.partition_size;
    j["refinement_steps"] = enc.refinement_steps;
    j["status"] = to_string(enc.status);
    j["converged"] = enc.converged();
    j["gap"] = real(enc.gap());
    j["history_length"] = enc.history.size();
    return j;
}

json to_json(const SandwichVerdict& v)
{
    json j;
    j["lower_sum"] = real(v.lower_sum);
    j["increment"] = real(v.increment);
    j["increment_enclosure"] = to_json(v.increment_enclosure);
    j["upper_sum"] = real(v.upper_sum);
    j["pass"] = v.pass;
    j["outcome"] = to_string(v.outcome);
    j["partition_size"] = v.partition_size;
    if (v.outcome == SandwichOutcome::unverified_hypothesis) {
        j["derivative_bound"] = nullptr;
        j["note"] = "unverified-hypothesis: the derivative could not be certified bounded";
    } else {
        j["derivative_bound"] = to_json(v.derivative_bound);
    }
    return j;
}

json to_json(const ConditionReport& r)
{
    json j;
    j["condition"] = to_string(r.condition);
    if (r.condition == Condition::uno) {
        j["n"] = r.n;
    }
    j["status"] = to_string(r.status);
    j["witness"] = optional_real(r.witness);
    j["delta"] = optional_real(r.delta);
    j["detail"] = r.detail;
    return j;
}

json to_json(const MinLevelSet& m)
{
    json j;
    j["status"] = to_string(m.status);
    j["x_bar"] = optional_json(m.x_bar);
    j["tangency"] = optional_json(m.tangency);
    j["scan_start"] = real(m.scan_start);
    j["tail_verified"] = m.tail_verified;
    j["evaluations"] = m.evaluations;
    return j;
}

json to_json(const ChainStep& s)
{
    json j;
    j["label"] = s.label;
    j["lhs"] = optional_json(s.lhs);
    j["relation"] = s.relation;
    j["rhs"] = optional_json(s.rhs);
    j["status"] = to_string(s.status);
    j["holds"] = s.holds;
    j["hypothesis"] = s.hypothesis;
    j["note"] = s.note;
    return j;
}

json to_json(const ChainTrace& t)
{
    json j;
    j["n"] = t.n;
    j["C"] = real(t.C);
    j["level_set"] = to_json(t.level_set);
    j["en_empty"] = t.en_empty;
    j["steps"] = json::array();
    for (const auto& s : t.steps) {
        j["steps"].push_back(to_json(s));
    }
    j["first_failure"] = t.first_failure ? json(*t.first_failure + 1) : json(nullptr);
    j["conclusion"] = t.conclusion;
    return j;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace certint::report
