#pragma once

#include <string>
#include <vector>

#include "robustcheck/knowledge.hpp"

namespace robustcheck {

struct AttackConfig {
  int max_len = 1;
  bool include_diverge = false;
};

// One command per hole.
using AttackVector = std::vector<CmdPtr>;

// Commands a single hole may receive, in enumeration order: skip, then
// straight-line `x := v` sequences over untrusted variables by length, then
// `while 1 { skip }` if enabled.
std::vector<CmdPtr> hole_candidates(const Program& p, const AttackConfig& cfg);

// Cartesian product of hole_candidates over all holes, lexicographic.
std::vector<AttackVector> enumerate_attacks(const Program& p, const AttackConfig& cfg);

// Fills hole i with a bracket around a[i]. Throws ArityError.
CmdPtr substitute(const Program& p, const AttackVector& a);
CmdPtr substitute(const CmdPtr& body, int hole_count, const AttackVector& a);

// Fairness over every initial memory, judged on the reachability-tracking
// translation of p.
bool is_fair(const Program& p, const AttackVector& a);
std::vector<bool> fairness(const Program& p, const std::vector<AttackVector>& attacks);

// Whether a run with endorse events `other` lies outside the attack
// influence sanctioned by the first `n` endorse events of `tr`.
bool irrelevant_direct(const std::vector<LabelledValue>& tr, size_t n, const std::vector<LabelledValue>& other);
bool irrelevant_checked(const std::vector<LabelledValue>& tr, size_t n, const std::vector<LabelledValue>& other);

// Fair attacks from the universe whose run on m is irrelevant for trace tr
// (a full trace of some substitution of p on m).
std::vector<AttackVector> irrelevant_attacks(const Program& p, const Memory& m, const Trace& tr,
                                             const AttackConfig& cfg);
std::vector<AttackVector> irrelevant_attacks_checked(const Program& p, const Memory& m, const Trace& tr,
                                                     const AttackConfig& cfg);

std::string attack_to_string(const CmdPtr& a);
// Holes separated by " | ".
std::string attack_to_string(const AttackVector& a);

}  // namespace robustcheck
