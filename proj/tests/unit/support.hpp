#pragma once

// Independent reference implementations used as test oracles. They only use
// the AST, the single-step relation and plain loops over memories.

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "robustcheck/ast.hpp"
#include "robustcheck/errors.hpp"
#include "robustcheck/parser.hpp"
#include "robustcheck/semantics.hpp"

namespace rc = robustcheck;

inline rc::Program prog(const std::string& src, int N = 4) { return rc::parse_program(src, {false, N}); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const char* f : {"declassify_guard", "fairness_guarded_hole", "password_update", "embargo",
                        "knowledge_loop", "occlusion", "availability_loop", "guarded_leak", "leak_before_compare",
                        "loop_threshold", "compare_untrusted", "conditional_endorse_compare", "endorse_comparison",
                        "endorse_then_compare", "endorse_wrong_value", "unchecked_guard",
                        "integrity_conditional_endorse", "integrity_endorse", "integrity_untrusted_write", "segmentation"})
    out.push_back(std::string(CORPUS_DIR) + "/" + f + ".ifc");
  return out;
}

// A run as produced by iterating step(): events before the first repeated
// configuration, and the events of one period after it.
struct OracleRun {
  bool diverged = false;
  rc::Trace prefix;  // ends with Term when terminated
  rc::Trace cycle;
};

inline OracleRun oracle_run(const rc::CmdPtr& c0, const rc::SecurityEnv& env, const rc::Memory& m0, int N) {
  struct Config {
    rc::CmdPtr c;
    rc::Memory m;
    size_t events;
  };
  std::vector<Config> seen;
  OracleRun r;
  rc::Trace events;
  rc::CmdPtr c = c0;
  rc::Memory m = m0;
  while (c) {
    for (const auto& s : seen) {
      if (s.m == m && rc::equal(s.c, c)) {
        r.diverged = true;
        r.prefix.assign(events.begin(), events.begin() + static_cast<long>(s.events));
        r.cycle.assign(events.begin() + static_cast<long>(s.events), events.end());
        return r;
      }
    }
    seen.push_back({c, m, events.size()});
    auto st = rc::step(c, env, m, N);
    if (st.event) events.push_back(*st.event);
    c = st.next;
    m = st.memory;
  }
  events.push_back(rc::Event::term());
  r.prefix = events;
  return r;
}

inline bool oracle_low(const rc::Event& e, const rc::SecurityEnv& env, rc::Mode mode) {
  switch (e.kind) {
    case rc::Event::Kind::Assign:
    case rc::Event::Kind::Endorse: return env.vars()[static_cast<size_t>(e.var)].level.conf == rc::Conf::Public;
    case rc::Event::Kind::Term: return true;
    case rc::Event::Kind::Div: return mode == rc::Mode::PS;
    case rc::Event::Kind::Checked: return false;
  }
  return false;
}

// First `limit` low events of a run (fewer if the low sequence is finite).
inline rc::Trace oracle_low_events(const OracleRun& r, const rc::SecurityEnv& env, rc::Mode mode, size_t limit) {
  rc::Trace out;
  for (const auto& e : r.prefix)
    if (oracle_low(e, env, mode) && out.size() < limit) out.push_back(e);
  if (!r.diverged) return out;
  rc::Trace cyc;
  for (const auto& e : r.cycle)
    if (oracle_low(e, env, mode)) cyc.push_back(e);
  if (cyc.empty()) {
    if (mode == rc::Mode::PS && out.size() < limit) out.push_back(rc::Event::div());
    return out;
  }
  while (out.size() < limit)
    for (const auto& e : cyc)
      if (out.size() < limit) out.push_back(e);
  return out;
}

// What a low observer sees: an endorsement to a public variable reads as the
// assignment it performs.
inline bool same_event(const rc::Event& a, const rc::Event& b) {
  auto writes = [](const rc::Event& e) {
    return e.kind == rc::Event::Kind::Assign || e.kind == rc::Event::Kind::Endorse;
  };
  if (writes(a) && writes(b)) return a.var == b.var && a.value == b.value;
  return a.kind == b.kind && a.var == b.var && a.value == b.value && a.branch == b.branch;
}

// Every memory of the environment, pinned variables held at their value.
inline std::vector<rc::Memory> oracle_memories(const rc::SecurityEnv& env, int N) {
  std::vector<size_t> free;
  rc::Memory base(env.size(), 0);
  for (size_t i = 0; i < env.size(); ++i) {
    if (env.vars()[i].pinned) base[i] = *env.vars()[i].pinned;
    else free.push_back(i);
  }
  size_t total = 1;
  for (size_t k = 0; k < free.size(); ++k) total *= static_cast<size_t>(N);
  std::vector<rc::Memory> out;
  for (size_t idx = 0; idx < total; ++idx) {
    rc::Memory m = base;
    size_t rest = idx;
    for (size_t k = free.size(); k > 0; --k) {
      m[free[k - 1]] = static_cast<int>(rest % static_cast<size_t>(N));
      rest /= static_cast<size_t>(N);
    }
    out.push_back(m);
  }
  return out;
}

inline bool same_public(const rc::Memory& a, const rc::Memory& b, const rc::SecurityEnv& env) {
  for (size_t i = 0; i < env.size(); ++i)
    if (env.vars()[i].level.conf == rc::Conf::Public && a[i] != b[i]) return false;
  return true;
}

inline bool low_prefix(const rc::Trace& low, const rc::Trace& pre) {
  if (low.size() < pre.size()) return false;
  for (size_t i = 0; i < pre.size(); ++i)
    if (!same_event(low[i], pre[i])) return false;
  return true;
}

// k: memories agreeing with m on public variables whose low sequence starts
// with `pre`. extra = 1 gives progress knowledge.
inline std::vector<rc::Memory> oracle_knowledge(const rc::CmdPtr& c, const rc::SecurityEnv& env, int N,
                                                const rc::Memory& m, const rc::Trace& pre, rc::Mode mode,
                                                size_t extra = 0) {
  std::vector<rc::Memory> out;
  for (const auto& m2 : oracle_memories(env, N)) {
    if (!same_public(m, m2, env)) continue;
    auto low = oracle_low_events(oracle_run(c, env, m2, N), env, mode, pre.size() + extra);
    if (low.size() == pre.size() + extra && low_prefix(low, pre)) out.push_back(m2);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<rc::Memory> sorted(std::vector<rc::Memory> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline bool subset(const std::vector<rc::Memory>& a, const std::vector<rc::Memory>& b) {
  auto x = sorted(a), y = sorted(b);
  return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

// Straight-line programs with at most one loop over h, h2 (secret), l, l2
// (public) and optionally an untrusted u; values stay small so N <= 4 suffices.
inline std::string random_program(std::mt19937& rng, bool with_u = false) {
  std::vector<std::string> vars = {"h", "h2", "l", "l2"};
  if (with_u) vars.push_back("u");
  std::vector<std::string> targets = {"h", "l", "l2", "h2"};
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  auto atom = [&]() { return rng() % 3 == 0 ? std::to_string(rng() % 4) : pick(vars); };
  const char* ops[] = {"+", "-", "*", "=", "<", "<=", "!=", ">"};
  auto expr = [&]() {
    if (rng() % 3 == 0) return atom();
    return atom() + " " + ops[rng() % 8] + " " + atom();
  };
  auto stmt = [&]() -> std::string {
    if (rng() % 4 == 0) return "if " + expr() + " then " + pick(targets) + " := " + expr() + " else " + pick(targets) + " := " + expr();
    return pick(targets) + " := " + expr();
  };
  std::string src = "var h, h2 : secret trusted;\nvar l, l2 : public trusted;\n";
  if (with_u) src += "var u : public untrusted;\n";
  std::vector<std::string> body;
  size_t n = 1 + rng() % 4;
  for (size_t i = 0; i < n; ++i) body.push_back(stmt());
  if (rng() % 2) {
    std::string loop = "while " + expr() + " do { " + stmt() + "; " + stmt() + " }";
    body.insert(body.begin() + static_cast<long>(rng() % (body.size() + 1)), loop);
  }
  for (size_t i = 0; i < body.size(); ++i) src += body[i] + (i + 1 < body.size() ? ";\n" : "\n");
  return src;
}
