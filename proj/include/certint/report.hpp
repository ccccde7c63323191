#pragma once

#include <string>

#include <json.hpp>

#include "certint/darboux.hpp"
#include "certint/flatness.hpp"
#include "certint/interval.hpp"
#include "certint/volterra.hpp"

namespace certint::report {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

/// Finite doubles as JSON numbers, infinities as the strings "inf" / "-inf".
json real(double v);
json to_json(const Interval& x);
json to_json(const DarbouxEnclosure& enc);
json to_json(const SandwichVerdict& v);
json to_json(const ConditionReport& r);
json to_json(const MinLevelSet& m);
json to_json(const ChainStep& s);
json to_json(const ChainTrace& t);

/// UTC time in ISO 8601, the only non-deterministic field of a report.
std::string utc_timestamp();

} // namespace certint::report
