#include "robustcheck/control.hpp"

#include <algorithm>
#include <set>

#include "robustcheck/errors.hpp"

namespace robustcheck {

Segmentation canonical_segmentation(const RunInfo& r, size_t len, Mode mode) {
  Segmentation s;
  for (size_t j = 1; j <= len; ++j)
    if (r.release(j, mode)) s.boundaries.push_back(j - 1);
  if (s.boundaries.empty() || s.boundaries.back() != len) s.boundaries.push_back(len);
  return s;
}

void similar_lengths(const RunInfo& ta, size_t len, const RunInfo& tb, Mode mode, std::vector<char>& ok) {
  const size_t lb = tb.low.size();
  const size_t W = lb + 1;
  // reach[i * W + j]: first i events of ta aligned with first j of tb.
  std::vector<char> reach((len + 1) * W, 0);
  reach[0] = 1;
  for (size_t i = 0; i <= len; ++i) {
    for (size_t j = 0; j <= lb; ++j) {
      if (!reach[i * W + j]) continue;
      if (i < len && !ta.release(i + 1, mode)) reach[(i + 1) * W + j] = 1;
      if (j < lb && !tb.release(j + 1, mode)) reach[i * W + j + 1] = 1;
      if (i < len && j < lb && ta.low[i] == tb.low[j]) reach[(i + 1) * W + j + 1] = 1;
    }
  }
  ok.assign(reach.begin() + static_cast<long>(len * W), reach.end());
}

bool similar_runs(const RunInfo& ta, size_t len_a, const RunInfo& tb, size_t len_b, Mode mode) {
  std::vector<char> ok;
  similar_lengths(ta, len_a, tb, mode, ok);
  return len_b < ok.size() && ok[len_b];
}

bool in_attacker_control(const RunInfo& ta, size_t len, const RunInfo& tb, Mode mode) {
  std::vector<char> ok;
  similar_lengths(ta, len, tb, mode, ok);
  for (char c : ok)
    if (c) return true;
  return false;
}

bool in_release_control(const RunInfo& ta, size_t len, const RunInfo& tb, Mode mode) {
  std::vector<char> ok;
  similar_lengths(ta, len, tb, mode, ok);
  const size_t fin = tb.low.size();
  for (size_t n = 0; n < ok.size(); ++n) {
    if (!ok[n]) continue;
    if (tb.terminated) return true;
    if (mode == Mode::PS) {
      if (tb.k[n] > tb.k[fin] || tb.k[n] > tb.kdiv[n]) return true;
    } else {
      if (tb.kprog[n] > tb.k[fin]) return true;
    }
  }
  return false;
}

// ---- program-level ----

namespace {

struct Local {
  Block block;
  size_t secret = 0;
};

Local local_block(const Program& p, const Memory& m, const std::vector<AttackVector>& attacks, Mode mode) {
  std::vector<Machine> machines;
  machines.reserve(attacks.size());
  for (const auto& a : attacks) machines.emplace_back(substitute(p, a), p.env, p.domain_size);
  MemorySpace space(p.env, p.domain_size);
  LabelTable labels;
  Local l;
  l.block = build_block(machines, space, p.env, space.public_index(m), mode, labels);
  l.secret = space.secret_index(m);
  return l;
}

template <typename Member>
std::vector<AttackVector> control_set(const Program& p, const Memory& m, const AttackVector& a, Mode mode,
                                      const AttackConfig& cfg, std::optional<size_t> len, Member&& member) {
  auto universe = enumerate_attacks(p, cfg);
  auto fair = fairness(p, universe);
  std::vector<AttackVector> attacks{a};
  for (size_t i = 0; i < universe.size(); ++i)
    if (fair[i]) attacks.push_back(universe[i]);
  Local l = local_block(p, m, attacks, mode);
  const RunInfo& ta = l.block.runs[0][l.secret];
  size_t n = len ? std::min(*len, ta.low.size()) : ta.low.size();
  std::vector<AttackVector> out;
  for (size_t i = 1; i < attacks.size(); ++i)
    if (member(ta, n, l.block.runs[i][l.secret], mode)) out.push_back(attacks[i]);
  return out;
}

}  // namespace

Segmentation canonical_segmentation(const Program& p, const Memory& m, const AttackVector& a, Mode mode) {
  Local l = local_block(p, m, {a}, mode);
  const RunInfo& r = l.block.runs[0][l.secret];
  return canonical_segmentation(r, r.low.size(), mode);
}

bool similar(const Program& p, const Memory& m, const AttackVector& a, const AttackVector& b, Mode mode) {
  Local l = local_block(p, m, {a, b}, mode);
  const RunInfo& ta = l.block.runs[0][l.secret];
  const RunInfo& tb = l.block.runs[1][l.secret];
  return similar_runs(ta, ta.low.size(), tb, tb.low.size(), mode);
}

std::vector<AttackVector> attacker_control(const Program& p, const Memory& m, const AttackVector& a, Mode mode,
                                           const AttackConfig& cfg, std::optional<size_t> len) {
  return control_set(p, m, a, mode, cfg, len, in_attacker_control);
}

std::vector<AttackVector> release_control(const Program& p, const Memory& m, const AttackVector& a, Mode mode,
                                          const AttackConfig& cfg, std::optional<size_t> len) {
  return control_set(p, m, a, mode, cfg, len, in_release_control);
}

// ---- oracle ----

namespace {

struct OracleTrace {
  Trace low;
  // Positions 1..L whose event changes knowledge (mode-specific test).
  std::vector<bool> changes;
};

OracleTrace oracle_trace(const Program& p, const Memory& m, const AttackVector& a, Mode mode,
                         std::optional<size_t> len) {
  CmdPtr c = substitute(p, a);
  RunResult r = run(c, p.env, m, p.domain_size);
  if (r.diverged() && !low_projection(r.lasso, p.env, mode).empty())
    throw ScaleError("oracle cannot handle an infinite low sequence");
  OracleTrace o;
  o.low = low_projection(full_trace(r), p.env, mode);
  if (len) {
    if (*len > o.low.size()) throw Error("oracle prefix longer than the trace");
    o.low.resize(*len);
  }
  if (o.low.size() > kOracleMaxEvents)
    throw ScaleError("oracle limited to " + std::to_string(kOracleMaxEvents) + " low events");
  const size_t L = o.low.size();
  o.changes.assign(L + 1, false);
  std::vector<MemorySet> k(L + 1), kp(L + 1);
  for (size_t i = 0; i <= L; ++i) {
    Trace li(o.low.begin(), o.low.begin() + static_cast<long>(i));
    k[i] = knowledge(c, p.env, p.domain_size, m, li, mode);
    if (mode == Mode::PI) kp[i] = progress_knowledge(c, p.env, p.domain_size, m, li, mode);
  }
  for (size_t i = 1; i <= L; ++i) o.changes[i] = mode == Mode::PS ? k[i - 1] != k[i] : kp[i - 1] != k[i];
  return o;
}

// Event sequences at the boundaries of every admissible segmentation.
std::set<std::vector<std::uint32_t>> segmentations(const Program& p, const OracleTrace& t) {
  const size_t L = t.low.size();
  std::set<std::vector<std::uint32_t>> out;
  for (unsigned mask = 0; mask < (1u << L); ++mask) {
    bool valid = true;
    std::vector<std::uint32_t> events;
    for (size_t i = 1; i <= L && valid; ++i) {
      if ((mask >> (i - 1)) & 1u) events.push_back(event_code(t.low[i - 1], p.domain_size));
      else if (t.changes[i]) valid = false;
    }
    if (valid) out.insert(std::move(events));
  }
  return out;
}

bool intersects(const std::set<std::vector<std::uint32_t>>& a, const std::set<std::vector<std::uint32_t>>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  return std::any_of(small.begin(), small.end(), [&](const auto& x) { return large.count(x) > 0; });
}

}  // namespace

bool similar_oracle(const Program& p, const Memory& m, const AttackVector& a, const AttackVector& b, Mode mode,
                    std::optional<size_t> len_a, std::optional<size_t> len_b) {
  OracleTrace ta = oracle_trace(p, m, a, mode, len_a);
  OracleTrace tb = oracle_trace(p, m, b, mode, len_b);
  return intersects(segmentations(p, ta), segmentations(p, tb));
}

std::vector<std::vector<int>> similar_oracle_all(const Program& p, const Memory& m,
                                                 const std::vector<AttackVector>& attacks, Mode mode) {
  std::vector<std::optional<OracleTrace>> ts(attacks.size());
  std::vector<std::set<std::vector<std::uint32_t>>> segs(attacks.size());
  for (size_t i = 0; i < attacks.size(); ++i) {
    try {
      ts[i] = oracle_trace(p, m, attacks[i], mode, std::nullopt);
      segs[i] = segmentations(p, *ts[i]);
    } catch (const ScaleError&) {
    }
  }
  std::vector<std::vector<int>> out(attacks.size(), std::vector<int>(attacks.size(), -1));
  for (size_t i = 0; i < attacks.size(); ++i)
    for (size_t j = 0; j < attacks.size(); ++j)
      if (ts[i] && ts[j]) out[i][j] = intersects(segs[i], segs[j]) ? 1 : 0;
  return out;
}

}  // namespace robustcheck
