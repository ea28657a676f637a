#include "robustcheck/attacks.hpp"

#include "robustcheck/errors.hpp"
#include "robustcheck/transform.hpp"

namespace robustcheck {

std::vector<CmdPtr> hole_candidates(const Program& p, const AttackConfig& cfg) {
  std::vector<CmdPtr> atoms;
  for (const auto& v : p.env.vars()) {
    if (is_trusted(v.level) || v.pinned) continue;
    for (int c = 0; c < p.domain_size; ++c) atoms.push_back(ast::assign(v.name, ast::num(c)));
  }
  std::vector<CmdPtr> out{ast::skip()};
  std::vector<std::vector<CmdPtr>> layer{{}};
  for (int len = 1; len <= cfg.max_len && !atoms.empty(); ++len) {
    std::vector<std::vector<CmdPtr>> next;
    next.reserve(layer.size() * atoms.size());
    for (const auto& prefix : layer) {
      for (const auto& a : atoms) {
        auto seq = prefix;
        seq.push_back(a);
        out.push_back(ast::seq(seq));
        next.push_back(std::move(seq));
      }
    }
    layer = std::move(next);
  }
  if (cfg.include_diverge) out.push_back(ast::while_(ast::num(1), ast::skip()));
  return out;
}

std::vector<AttackVector> enumerate_attacks(const Program& p, const AttackConfig& cfg) {
  auto cands = hole_candidates(p, cfg);
  std::vector<AttackVector> out{AttackVector{}};
  for (int h = 0; h < p.hole_count; ++h) {
    std::vector<AttackVector> next;
    next.reserve(out.size() * cands.size());
    for (const auto& v : out) {
      for (const auto& c : cands) {
        auto w = v;
        w.push_back(c);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

CmdPtr fill(const CmdPtr& c, const AttackVector& a) {
  if (!c) return c;
  if (c->kind == Command::Kind::Hole) return ast::bracket(a[static_cast<size_t>(c->hole)], c->span);
  auto first = fill(c->first, a);
  auto second = fill(c->second, a);
  if (first == c->first && second == c->second) return c;
  auto n = std::make_shared<Command>(*c);
  n->first = first;
  n->second = second;
  return n;
}

std::vector<LabelledValue> endorse_list(const Trace& tr, Event::Kind kind, LabelTable& labels) {
  std::vector<LabelledValue> out;
  for (const auto& e : tr)
    if (e.kind == kind) out.push_back({labels.id(e.label), e.value, e.branch});
  return out;
}

template <typename Pred>
std::vector<AttackVector> irrelevant_by(const Program& p, const Memory& m, const Trace& tr, const AttackConfig& cfg,
                                        Event::Kind kind, Pred&& irrelevant) {
  LabelTable labels;
  auto mine = endorse_list(tr, kind, labels);
  auto attacks = enumerate_attacks(p, cfg);
  auto fair = fairness(p, attacks);
  std::vector<AttackVector> out;
  for (size_t i = 0; i < attacks.size(); ++i) {
    if (!fair[i]) continue;
    RunResult r = run(substitute(p, attacks[i]), p.env, m, p.domain_size);
    Trace t = r.prefix;
    // A lasso repeats its endorse events; two periods cover any first difference
    // within the finite list of tr.
    for (size_t rep = 0; r.diverged() && rep < mine.size() + 1; ++rep) t.insert(t.end(), r.lasso.begin(), r.lasso.end());
    if (irrelevant(mine, mine.size(), endorse_list(t, kind, labels))) out.push_back(attacks[i]);
  }
  return out;
}

}  // namespace

CmdPtr substitute(const CmdPtr& body, int hole_count, const AttackVector& a) {
  if (static_cast<int>(a.size()) != hole_count)
    throw ArityError("attack vector has " + std::to_string(a.size()) + " components for " +
                     std::to_string(hole_count) + " holes");
  return fill(body, a);
}

CmdPtr substitute(const Program& p, const AttackVector& a) { return substitute(p.body, p.hole_count, a); }

std::vector<bool> fairness(const Program& p, const std::vector<AttackVector>& attacks) {
  Program tp = treach(p);
  std::vector<Machine> machines;
  machines.reserve(attacks.size());
  for (const auto& a : attacks) machines.emplace_back(substitute(tp, a), tp.env, tp.domain_size);
  MemorySpace space(tp.env, tp.domain_size);
  LabelTable labels;
  std::vector<bool> fair(attacks.size(), true);
  for (size_t pub = 0; pub < space.public_count(); ++pub) {
    Block block = build_block(machines, space, tp.env, pub, Mode::PS, labels);
    for (size_t a = 0; a < attacks.size(); ++a) {
      if (!fair[a]) continue;
      for (const RunInfo& r : block.runs[a]) {
        for (const auto& seg : r.segments) {
          if (seg.exit_low >= r.k.size()) continue;
          if (seg.trusted_inside || r.k[seg.entry_low] != r.k[seg.exit_low]) {
            fair[a] = false;
            break;
          }
        }
        if (!fair[a]) break;
      }
    }
  }
  return fair;
}

bool is_fair(const Program& p, const AttackVector& a) {
  if (static_cast<int>(a.size()) != p.hole_count)
    throw ArityError("attack vector arity does not match the number of holes");
  return fairness(p, {a})[0];
}

bool irrelevant_direct(const std::vector<LabelledValue>& tr, size_t n, const std::vector<LabelledValue>& other) {
  size_t j = 0;
  while (j < n && j < other.size() && tr[j].label == other[j].label && tr[j].value == other[j].value) ++j;
  return j < n && j < other.size() && tr[j].label == other[j].label && tr[j].value != other[j].value;
}

bool irrelevant_checked(const std::vector<LabelledValue>& tr, size_t n, const std::vector<LabelledValue>& other) {
  size_t j = 0;
  while (j < n && j < other.size() && tr[j] == other[j]) ++j;
  return j < n && j < other.size() && tr[j].label == other[j].label && tr[j].value != other[j].value &&
         tr[j].branch + other[j].branch >= 1;
}

std::vector<AttackVector> irrelevant_attacks(const Program& p, const Memory& m, const Trace& tr,
                                             const AttackConfig& cfg) {
  return irrelevant_by(p, m, tr, cfg, Event::Kind::Endorse, irrelevant_direct);
}

std::vector<AttackVector> irrelevant_attacks_checked(const Program& p, const Memory& m, const Trace& tr,
                                                     const AttackConfig& cfg) {
  return irrelevant_by(p, m, tr, cfg, Event::Kind::Checked, irrelevant_checked);
}

std::string attack_to_string(const CmdPtr& a) {
  if (!a) return "skip";
  switch (a->kind) {
    case Command::Kind::Skip: return "skip";
    case Command::Kind::Seq: return attack_to_string(a->first) + "; " + attack_to_string(a->second);
    case Command::Kind::Assign: return a->var + ":=" + to_source(a->expr);
    default: {
      std::string s = to_source(a);
      // collapse the block layout onto one line
      std::string out;
      bool space = false;
      for (char ch : s) {
        if (ch == '\n' || ch == ' ') {
          space = !out.empty();
          continue;
        }
        if (space) out += ' ';
        space = false;
        out += ch;
      }
      return out;
    }
  }
}

std::string attack_to_string(const AttackVector& a) {
  if (a.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) out += " | ";
    out += attack_to_string(a[i]);
  }
  return out;
}

}  // namespace robustcheck
