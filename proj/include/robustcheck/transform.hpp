#pragma once

#include <string>
#include <vector>

#include "robustcheck/ast.hpp"

namespace robustcheck {

// Prefixes every hole with `reach := reach + 1` and declares `reach` as a
// public trusted variable pinned to 0. Throws ReservedVarError if `reach`
// is already declared.
Program treach(const Program& p);

struct LoweredEndorse {
  std::string source_label;  // label of the checked endorsement
  std::string cond_label;    // endorsement of the condition
  std::string var_label;     // endorsement of the variable
  std::string cond_temp;
  std::string var_temp;
};

struct Lowered {
  Program program;
  std::vector<LoweredEndorse> endorsements;  // in program order
};

// Replaces each checked endorsement by two direct endorsements:
//   t0 := endorse(e); if t0 then { t1 := endorse(x); c1[t1/x] } else c2
// The k-th checked endorsement (pre-order) gets labels 2k-1 and 2k.
// Throws UnsupportedConstruct if the program also has direct endorsements.
Lowered lower_checked(const Program& p);

// Replaces reads of x by y.
ExprPtr rename_reads(const ExprPtr& e, const std::string& x, const std::string& y);
CmdPtr rename_reads(const CmdPtr& c, const std::string& x, const std::string& y);

}  // namespace robustcheck
