#include "robustcheck/robustness.hpp"

#include <algorithm>
#include <map>

#include "robustcheck/errors.hpp"

namespace robustcheck {

const char* to_string(Property p) {
  switch (p) {
    case Property::Robustness: return "robustness";
    case Property::RobustnessEndorse: return "robustness-endorse";
    case Property::RobustnessChecked: return "robustness-checked";
    case Property::Integrity: return "integrity";
  }
  return "?";
}

std::optional<Property> property_from_string(const std::string& s) {
  for (auto p : {Property::Robustness, Property::RobustnessEndorse, Property::RobustnessChecked, Property::Integrity})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

namespace {

using Bits = std::vector<char>;

class Engine {
 public:
  Engine(const Program& p, Property prop, Mode mode, const AttackConfig& cfg)
      : p_(p), prop_(prop), mode_(mode), space_(p.env, p.domain_size) {
    auto universe = enumerate_attacks(p, cfg);
    auto fair = fairness(p, universe);
    for (size_t i = 0; i < universe.size(); ++i)
      if (fair[i]) attacks_.push_back(universe[i]);
    machines_.reserve(attacks_.size());
    for (const auto& a : attacks_) machines_.emplace_back(substitute(p, a), p.env, p.domain_size);
    v_.property = prop;
    v_.mode = mode;
    v_.universe = {p.domain_size, cfg.max_len, cfg.include_diverge, space_.size(), universe.size(), attacks_.size()};
  }

  Verdict run() {
    for (size_t pub = 0; pub < space_.public_count(); ++pub) {
      Block block = build_block(machines_, space_, p_.env, pub, mode_, labels_);
      for (size_t s = 0; s < space_.secret_count(); ++s) {
        bool ok = prop_ == Property::Integrity ? integrity_at(block, s) : robust_at(block, s);
        if (!ok) return v_;
      }
    }
    return v_;
  }

 private:
  static std::vector<std::uint32_t> key_of(const RunInfo& r, size_t len, Mode mode) {
    std::vector<std::uint32_t> key;
    key.reserve(2 * len);
    for (size_t i = 0; i < len; ++i) {
      key.push_back(r.low[i]);
      key.push_back(r.release(i + 1, mode) ? 1u : 0u);
    }
    return key;
  }

  bool irrelevant(const RunInfo& ta, size_t j, const RunInfo& tb) const {
    switch (prop_) {
      case Property::RobustnessEndorse: return irrelevant_direct(ta.endorse, ta.low_endorse[j - 1], tb.endorse);
      case Property::RobustnessChecked: return irrelevant_checked(ta.checked, ta.low_checked[j - 1], tb.checked);
      default: return false;
    }
  }

  bool robust_at(const Block& block, size_t s) {
    std::map<std::vector<std::uint32_t>, Bits> rc_cache, ac_cache;
    const size_t B = attacks_.size();
    for (size_t a = 0; a < B; ++a) {
      const RunInfo& ta = block.runs[a][s];
      for (size_t j = 1; j <= ta.low.size(); ++j) {
        if (!ta.release(j, mode_)) continue;
        ++v_.release_points;
        auto kb = key_of(ta, j - 1, mode_);
        auto rc = rc_cache.find(kb);
        if (rc == rc_cache.end()) {
          Bits bits(B);
          for (size_t b = 0; b < B; ++b) bits[b] = in_release_control(ta, j - 1, block.runs[b][s], mode_);
          rc = rc_cache.emplace(std::move(kb), std::move(bits)).first;
        }
        auto ka = key_of(ta, j, mode_);
        auto ac = ac_cache.find(ka);
        if (ac == ac_cache.end()) {
          Bits bits(B);
          for (size_t b = 0; b < B; ++b) bits[b] = in_attacker_control(ta, j, block.runs[b][s], mode_);
          ac = ac_cache.emplace(std::move(ka), std::move(bits)).first;
        }
        for (size_t b = 0; b < B; ++b) {
          if (!rc->second[b] || ac->second[b]) continue;
          if (irrelevant(ta, j, block.runs[b][s])) continue;
          reject(block.pub, s, a, b, j,
                 prop_ == Property::Robustness ? "release control not within attacker control"
                                               : "release control minus irrelevant attacks not within attacker control");
          return false;
        }
      }
    }
    return true;
  }

  static bool trusted_prefix(const RunInfo& ta, size_t len, const RunInfo& tb) {
    if (tb.trusted.size() < len) return false;
    return std::equal(ta.trusted.begin(), ta.trusted.begin() + static_cast<long>(len), tb.trusted.begin());
  }

  bool integrity_at(const Block& block, size_t s) {
    const size_t B = attacks_.size();
    for (size_t a = 0; a < B; ++a) {
      const RunInfo& ta = block.runs[a][s];
      for (size_t j = 1; j <= ta.trusted.size(); ++j) {
        ++v_.release_points;
        for (size_t b = 0; b < B; ++b) {
          const RunInfo& tb = block.runs[b][s];
          bool progress = trusted_prefix(ta, j - 1, tb) && (tb.trusted.size() > j - 1 || !tb.trusted_complete);
          if (!progress || trusted_prefix(ta, j, tb)) continue;
          if (irrelevant_direct(ta.endorse, ta.trusted_endorse[j - 1], tb.endorse)) continue;
          reject(block.pub, s, a, b, j, "progress impact minus irrelevant attacks not within attacker impact");
          return false;
        }
      }
    }
    return true;
  }

  void reject(size_t pub, size_t s, size_t a, size_t b, size_t j, const char* clause) {
    Witness w;
    w.memory = space_.compose(pub, s);
    w.attack = attacks_[a];
    w.offending = attacks_[b];
    w.attack_trace = full_trace(machines_[a].run(w.memory));
    w.offending_trace = full_trace(machines_[b].run(w.memory));
    w.position = j;
    w.clause = clause;
    v_.accept = false;
    v_.witness = std::move(w);
  }

  const Program& p_;
  Property prop_;
  Mode mode_;
  MemorySpace space_;
  std::vector<AttackVector> attacks_;
  std::vector<Machine> machines_;
  LabelTable labels_;
  Verdict v_;
};

}  // namespace

Verdict check_robustness(const Program& p, Mode mode, const AttackConfig& cfg) {
  if (has_direct_endorse(p.body) || has_checked_endorse(p.body))
    throw UnsupportedConstruct("program uses endorsement; check robustness-endorse or robustness-checked instead");
  return Engine(p, Property::Robustness, mode, cfg).run();
}

Verdict check_robustness_endorse(const Program& p, Mode mode, const AttackConfig& cfg) {
  if (has_checked_endorse(p.body))
    throw UnsupportedConstruct("program uses checked endorsement; check robustness-checked instead");
  return Engine(p, Property::RobustnessEndorse, mode, cfg).run();
}

Verdict check_robustness_checked(const Program& p, Mode mode, const AttackConfig& cfg) {
  if (has_direct_endorse(p.body))
    throw UnsupportedConstruct(has_checked_endorse(p.body) ? "program mixes direct and checked endorsements"
                                                           : "program uses direct endorsement; check robustness-endorse instead");
  return Engine(p, Property::RobustnessChecked, mode, cfg).run();
}

Verdict check_integrity_robustness(const Program& p, const AttackConfig& cfg) {
  if (has_checked_endorse(p.body))
    throw UnsupportedConstruct("integrity robustness takes direct endorsements; lower checked endorsements first");
  return Engine(p, Property::Integrity, Mode::PI, cfg).run();
}

Verdict check(const Program& p, Property prop, Mode mode, const AttackConfig& cfg) {
  switch (prop) {
    case Property::Robustness: return check_robustness(p, mode, cfg);
    case Property::RobustnessEndorse: return check_robustness_endorse(p, mode, cfg);
    case Property::RobustnessChecked: return check_robustness_checked(p, mode, cfg);
    case Property::Integrity: return check_integrity_robustness(p, cfg);
  }
  return {};
}

namespace {

// Trusted codes of a run, unrolled to at least `need` events when infinite.
std::vector<std::uint32_t> trusted_codes(const RunResult& r, const SecurityEnv& env, int N, size_t need,
                                         bool& complete) {
  std::vector<std::uint32_t> out;
  for (const auto& e : trusted_projection(r.prefix, env)) out.push_back(event_code(e, N));
  auto cyc = trusted_projection(r.lasso, env);
  complete = !r.diverged() || cyc.empty();
  while (!complete && out.size() < need)
    for (const auto& e : cyc) out.push_back(event_code(e, N));
  return out;
}

std::vector<AttackVector> impact(const Program& p, const Memory& m, const Trace& trusted, const AttackConfig& cfg,
                                 bool progress) {
  std::vector<std::uint32_t> want;
  for (const auto& e : trusted) want.push_back(event_code(e, p.domain_size));
  auto universe = enumerate_attacks(p, cfg);
  auto fair = fairness(p, universe);
  std::vector<AttackVector> out;
  for (size_t i = 0; i < universe.size(); ++i) {
    if (!fair[i]) continue;
    RunResult r = run(substitute(p, universe[i]), p.env, m, p.domain_size);
    bool complete = true;
    auto got = trusted_codes(r, p.env, p.domain_size, want.size() + 1, complete);
    if (got.size() < want.size() || !std::equal(want.begin(), want.end(), got.begin())) continue;
    if (progress && got.size() == want.size() && complete) continue;
    out.push_back(universe[i]);
  }
  return out;
}

bool contains(const std::vector<AttackVector>& set, const AttackVector& a) {
  return std::any_of(set.begin(), set.end(), [&](const AttackVector& x) {
    if (x.size() != a.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (!equal(x[i], a[i])) return false;
    return true;
  });
}

}  // namespace

std::vector<AttackVector> attacker_impact(const Program& p, const Memory& m, const Trace& trusted,
                                          const AttackConfig& cfg) {
  return impact(p, m, trusted, cfg, false);
}

std::vector<AttackVector> progress_impact(const Program& p, const Memory& m, const Trace& trusted,
                                          const AttackConfig& cfg) {
  return impact(p, m, trusted, cfg, true);
}

bool replay(const Program& p, const Verdict& v, const AttackConfig& cfg) {
  if (v.accept || !v.witness) return false;
  const Witness& w = *v.witness;
  const size_t j = w.position;
  if (v.property == Property::Integrity) {
    Trace tt = trusted_projection(w.attack_trace, p.env);
    if (j == 0 || j > tt.size()) return false;
    Trace before(tt.begin(), tt.begin() + static_cast<long>(j - 1));
    Trace upto(tt.begin(), tt.begin() + static_cast<long>(j));
    if (!contains(progress_impact(p, w.memory, before, cfg), w.offending)) return false;
    if (contains(attacker_impact(p, w.memory, upto, cfg), w.offending)) return false;
    // the endorse events up to the trusted event, by position in the full trace
    size_t seen = 0, cut = 0;
    for (; cut < w.attack_trace.size() && seen < j; ++cut) {
      const Event& e = w.attack_trace[cut];
      if (e.kind == Event::Kind::Term ||
          ((e.kind == Event::Kind::Assign || e.kind == Event::Kind::Endorse) && is_trusted(p.env.level(e.var))))
        ++seen;
    }
    Trace prefix(w.attack_trace.begin(), w.attack_trace.begin() + static_cast<long>(cut));
    return !contains(irrelevant_attacks(p, w.memory, prefix, cfg), w.offending);
  }
  if (j == 0) return false;
  auto rc = release_control(p, w.memory, w.attack, v.mode, cfg, j - 1);
  auto ac = attacker_control(p, w.memory, w.attack, v.mode, cfg, j);
  if (!contains(rc, w.offending) || contains(ac, w.offending)) return false;
  if (v.property == Property::Robustness) return true;
  // trace prefix through the j-th low event
  size_t seen = 0, cut = 0;
  for (; cut < w.attack_trace.size() && seen < j; ++cut) {
    const Event& e = w.attack_trace[cut];
    if (e.kind == Event::Kind::Term || e.kind == Event::Kind::Div ||
        ((e.kind == Event::Kind::Assign || e.kind == Event::Kind::Endorse) && is_public(p.env.level(e.var))))
      ++seen;
  }
  Trace prefix(w.attack_trace.begin(), w.attack_trace.begin() + static_cast<long>(cut));
  auto omega = v.property == Property::RobustnessEndorse ? irrelevant_attacks(p, w.memory, prefix, cfg)
                                                         : irrelevant_attacks_checked(p, w.memory, prefix, cfg);
  return !contains(omega, w.offending);
}

}  // namespace robustcheck
