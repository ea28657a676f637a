#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robustcheck/control.hpp"

namespace robustcheck {

enum class Property { Robustness, RobustnessEndorse, RobustnessChecked, Integrity };

const char* to_string(Property p);
std::optional<Property> property_from_string(const std::string& s);

struct Universe {
  int domain = 4;
  int attack_len = 1;
  bool diverge = false;
  size_t memories = 0;
  size_t attacks = 0;
  size_t fair_attacks = 0;
};

struct Witness {
  Memory memory;
  AttackVector attack;
  AttackVector offending;
  Trace attack_trace;     // full run of p[attack] on memory
  Trace offending_trace;  // full run of p[offending] on memory
  size_t position = 0;    // 1-based index of the release (low) or trusted event
  // Which inclusion failed, e.g. "release control not within attacker control".
  std::string clause;
};

struct Verdict {
  bool accept = true;
  Property property = Property::Robustness;
  Mode mode = Mode::PS;
  Universe universe;
  std::optional<Witness> witness;
  size_t release_points = 0;  // (memory, attack, position) triples examined
};

Verdict check_robustness(const Program& p, Mode mode, const AttackConfig& cfg);
Verdict check_robustness_endorse(const Program& p, Mode mode, const AttackConfig& cfg);
Verdict check_robustness_checked(const Program& p, Mode mode, const AttackConfig& cfg);
Verdict check_integrity_robustness(const Program& p, const AttackConfig& cfg);

Verdict check(const Program& p, Property prop, Mode mode, const AttackConfig& cfg);

// Fair attacks whose trusted projection on m starts with `trusted`.
std::vector<AttackVector> attacker_impact(const Program& p, const Memory& m, const Trace& trusted,
                                          const AttackConfig& cfg);
// Those that also produce at least one further trusted event.
std::vector<AttackVector> progress_impact(const Program& p, const Memory& m, const Trace& trusted,
                                          const AttackConfig& cfg);

// Re-runs a Reject witness and reports whether the violation reproduces.
bool replay(const Program& p, const Verdict& v, const AttackConfig& cfg);

}  // namespace robustcheck
