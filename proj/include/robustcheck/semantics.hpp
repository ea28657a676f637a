#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robustcheck/ast.hpp"

namespace robustcheck {

// Values indexed by the variable's position in the SecurityEnv.
using Memory = std::vector<int>;

enum class Mode { PS, PI };

const char* to_string(Mode m);

struct Event {
  enum class Kind { Assign, Endorse, Checked, Term, Div };

  Kind kind = Kind::Term;
  int var = -1;  // Assign, Endorse: target; Checked: endorsed variable
  std::string label;
  int value = 0;
  int branch = 0;  // Checked only
  bool in_attack = false;

  bool operator==(const Event&) const = default;

  static Event assign(int x, int v, bool attack = false) { return {Kind::Assign, x, {}, v, 0, attack}; }
  static Event endorse(int x, std::string l, int v, bool attack = false) {
    return {Kind::Endorse, x, std::move(l), v, 0, attack};
  }
  static Event checked(int x, std::string l, int v, int b) { return {Kind::Checked, x, std::move(l), v, b, false}; }
  static Event term() { return {Kind::Term, -1, {}, 0, 0, false}; }
  static Event div() { return {Kind::Div, -1, {}, 0, 0, false}; }
};

using Trace = std::vector<Event>;

// An attack bracket as seen during a run: positions are indices into the
// full event sequence (prefix followed by repetitions of the lasso).
struct BracketMark {
  size_t entry = 0;
  std::optional<size_t> exit;  // absent when the run never leaves the bracket
};

struct RunResult {
  enum class Kind { Terminated, Diverged };

  Kind kind = Kind::Terminated;
  Trace prefix;  // ends with Term when terminated
  Trace lasso;   // events of one cycle period; empty unless diverged
  // Brackets entered in the prefix, then those entered during one lasso
  // period (flagged by index >= prefix_marks).
  std::vector<BracketMark> marks;
  size_t prefix_marks = 0;

  bool terminated() const { return kind == Kind::Terminated; }
  bool diverged() const { return kind == Kind::Diverged; }
};

int eval_expr(const ExprPtr& e, const SecurityEnv& env, const Memory& m, int N);

struct StepResult {
  CmdPtr next;  // null: halt
  Memory memory;
  std::optional<Event> event;
};

// One small step. Events produced inside a Bracket are tagged in_attack.
// Throws Error on a hole or on halt.
StepResult step(const CmdPtr& c, const SecurityEnv& env, const Memory& m, int N, bool in_attack = false);

// Compiled form of a hole-free command for repeated execution.
class Machine {
 public:
  Machine(const CmdPtr& c, const SecurityEnv& env, int N);
  ~Machine();
  Machine(Machine&&) noexcept;
  Machine& operator=(Machine&&) noexcept;

  RunResult run(const Memory& m) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunResult run(const CmdPtr& c, const SecurityEnv& env, const Memory& m, int N);

// Assign/Endorse events to public variables, Term, and Div (PS only).
Trace low_projection(const Trace& tr, const SecurityEnv& env, Mode mode);
// Assign/Endorse events to trusted variables, and Term.
Trace trusted_projection(const Trace& tr, const SecurityEnv& env);

// prefix, then lasso once, then Div if diverged.
Trace full_trace(const RunResult& r);

std::string event_to_string(const Event& e, const SecurityEnv& env);
// One event per line; in-attack events are prefixed with "[a] ".
std::string dump_trace(const Trace& tr, const SecurityEnv& env);

// Finite memory space with secret/public split. Pinned variables keep their
// pinned value. Memory index = public_index * secret_count + secret_index.
class MemorySpace {
 public:
  MemorySpace(const SecurityEnv& env, int N);

  size_t size() const { return public_count_ * secret_count_; }
  size_t public_count() const { return public_count_; }
  size_t secret_count() const { return secret_count_; }

  Memory memory(size_t idx) const { return compose(idx / secret_count_, idx % secret_count_); }
  Memory compose(size_t pub, size_t sec) const;
  size_t index(const Memory& m) const { return public_index(m) * secret_count_ + secret_index(m); }
  size_t public_index(const Memory& m) const;
  size_t secret_index(const Memory& m) const;

  const std::vector<int>& public_vars() const { return public_; }
  const std::vector<int>& secret_vars() const { return secret_; }
  int domain() const { return N_; }

 private:
  int N_;
  std::vector<int> public_;  // unpinned public variables
  std::vector<int> secret_;
  Memory base_;              // pinned values, zero elsewhere
  size_t public_count_ = 1;
  size_t secret_count_ = 1;
};

// Parse "x=1,h=7" into a memory; unspecified variables take their pinned
// value or 0. Throws EnvError on unknown names, Error on bad values.
Memory parse_memory(const std::string& spec, const SecurityEnv& env, int N);
std::string memory_to_string(const Memory& m, const SecurityEnv& env);

}  // namespace robustcheck
