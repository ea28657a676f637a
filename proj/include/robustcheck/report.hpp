#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "robustcheck/robustness.hpp"
#include "robustcheck/typecheck.hpp"

namespace robustcheck {

inline constexpr const char* kToolName = "robustcheck";
inline constexpr const char* kToolVersion = "0.1.0";

// ordered_json keeps insertion order, so field order is fixed by the code below.
using Json = nlohmann::ordered_json;

Json expr_json(const ExprPtr& e);
Json command_json(const CmdPtr& c);
Json program_json(const Program& p);

Json diagnostic_json(const TypeDiagnostic& d);
Json diagnostics_json(const std::vector<TypeDiagnostic>& ds);

Json universe_json(const Universe& u);
Json witness_json(const Program& p, const Witness& w);
Json verdict_json(const Program& p, const Verdict& v);

// One line per event, "[a] " marking attacker events.
std::vector<std::string> trace_lines(const Trace& tr, const SecurityEnv& env);

}  // namespace robustcheck
