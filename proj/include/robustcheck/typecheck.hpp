#pragma once

#include <set>
#include <string>
#include <vector>

#include "robustcheck/ast.hpp"

namespace robustcheck {

struct ExprTyping {
  Level level = kBottom;
  std::set<std::string> declassified;  // D
};

struct TypeDiagnostic {
  std::string rule;     // T-ASGMT, T-IF, T-WHILE, T-HOLE, T-ENDORSE, T-CHECKED
  std::string premise;  // the side condition that failed
  Span span;
  std::string message;
};

ExprTyping type_expr(const SecurityEnv& env, const ExprPtr& e);

// Empty when c is well typed under pc. Reports at most one failure per node
// and keeps checking sibling and nested commands.
std::vector<TypeDiagnostic> type_command(const SecurityEnv& env, Level pc, const CmdPtr& c);

inline std::vector<TypeDiagnostic> type_program(const Program& p) { return type_command(p.env, kBottom, p.body); }

}  // namespace robustcheck
