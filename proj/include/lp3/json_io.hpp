// JSON views of results, shared by the command line and the HTTP service so
// both print the same values. Field names follow the C++ members.
#pragma once

#include <json.hpp>

#include "lp3/consequence.hpp"
#include "lp3/debugger.hpp"
#include "lp3/modelcheck.hpp"
#include "lp3/slddnf.hpp"

namespace lp3 {

using Json = nlohmann::ordered_json;

Json to_json(const Substitution& s);
Json to_json(const Answer& a);
Json to_json(const Outcome& o);
Json to_json(const Question& q);
Json to_json(const OracleAnswer& r);
Json to_json(const Diagnosis& d);
Json to_json(const Violation& v);
Json to_json(const CheckReport& r);
Json to_json(const SynopsisReport& r);
Json to_json(const SuccessSetReport& r);
Json to_json(const FixpointResult& r);
Json to_json(const ObservedNode& n);

/// Diagnosis JSON, or null when the debugger found nothing.
Json diagnosis_json(const std::optional<Diagnosis>& d);

/// {"error": {kind, message, line, column}}; line and column are present for
/// parse errors only.
Json error_json(const std::exception& e);

}  // namespace lp3
