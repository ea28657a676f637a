#include "robustcheck/typecheck.hpp"

#include <map>

namespace robustcheck {

namespace {

// Environment with per-variable overrides, for the boosted Γ' of T-CHECKED.
struct Gamma {
  const SecurityEnv& env;
  std::map<std::string, Level> over;

  Level operator()(const std::string& x) const {
    auto it = over.find(x);
    return it == over.end() ? env.level(x) : it->second;
  }
};

ExprTyping type_in(const Gamma& g, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Const: return {kBottom, {}};
    case Expr::Kind::Var: return {g(e->name), {}};
    case Expr::Kind::BinOp: {
      auto l = type_in(g, e->lhs);
      auto r = type_in(g, e->rhs);
      l.level = join(l.level, r.level);
      l.declassified.insert(r.declassified.begin(), r.declassified.end());
      return l;
    }
    case Expr::Kind::Declassify: {
      auto inner = type_in(g, e->lhs);
      return {meet(inner.level, kPublicUntrusted), vars_of(e->lhs)};
    }
  }
  return {};
}

std::string lv(Level l) { return short_name(l); }

struct Checker {
  std::vector<TypeDiagnostic> out;

  void fail(const char* rule, const char* premise, Span s, std::string msg) {
    out.push_back({rule, premise, s, std::move(msg)});
  }

  void check(const Gamma& g, Level pc, const CmdPtr& c) {
    if (!c) return;
    switch (c->kind) {
      case Command::Kind::Skip: return;
      case Command::Kind::Seq:
        check(g, pc, c->first);
        check(g, pc, c->second);
        return;
      case Command::Kind::Assign: {
        auto t = type_in(g, c->expr);
        Level gx = g(c->var);
        if (!leq(join(t.level, pc), gx)) {
          fail("T-ASGMT", "l ⊔ pc ⊑ Γ(x)", c->span,
               "assignment to " + c->var + " " + lv(gx) + " from level " + lv(join(t.level, pc)));
          return;
        }
        for (const auto& y : t.declassified) {
          if (!leq(g(y), kSecretTrusted)) {
            fail("T-ASGMT", "∀y ∈ D. Γ(y) ⊑ (S,T)", c->span, "declassified variable " + y + " is untrusted");
            return;
          }
        }
        if (!t.declassified.empty() && !leq(pc, kPublicTrusted))
          fail("T-ASGMT", "D ≠ ∅ ⟹ pc ⊑ (P,T)", c->span, "declassification under pc " + lv(pc));
        return;
      }
      case Command::Kind::If:
      case Command::Kind::While: {
        const char* rule = c->kind == Command::Kind::If ? "T-IF" : "T-WHILE";
        auto t = type_in(g, c->expr);
        if (!t.declassified.empty()) fail(rule, "D = ∅", c->span, "declassification in a guard");
        Level inner = join(pc, t.level);
        check(g, inner, c->first);
        check(g, inner, c->second);
        return;
      }
      case Command::Kind::Hole:
        if (!leq(pc, kPublicUntrusted)) fail("T-HOLE", "pc ⊑ (P,U)", c->span, "hole under pc " + lv(pc));
        return;
      case Command::Kind::Endorse: {
        Level gx = g(c->var);
        auto t = type_in(g, c->expr);
        if (!leq(join(pc, gx), kSecretTrusted))
          fail("T-ENDORSE", "pc ⊔ Γ(x) ⊑ (S,T)", c->span, "endorsement into " + c->var + " " + lv(gx) + " under pc " + lv(pc));
        else if (!leq(pc, gx))
          fail("T-ENDORSE", "pc ⊑ Γ(x)", c->span, "pc " + lv(pc) + " above " + c->var + " " + lv(gx));
        else if (!t.declassified.empty())
          fail("T-ENDORSE", "D = ∅", c->span, "declassification inside an endorsement");
        else if (!leq(meet(t.level, kSecretTrusted), gx))
          fail("T-ENDORSE", "l ⊓ (S,T) ⊑ Γ(x)", c->span,
               "endorsed value of level " + lv(meet(t.level, kSecretTrusted)) + " into " + c->var + " " + lv(gx));
        return;
      }
      case Command::Kind::Checked: {
        Gamma boosted = g;
        boosted.over[c->var] = meet(g(c->var), kSecretTrusted);
        auto t = type_in(boosted, c->expr);
        Level pc2 = join(pc, t.level);
        if (!leq(pc2, kSecretTrusted))
          fail("T-CHECKED", "pc' ⊑ (S,T)", c->span, "check runs under untrusted pc' " + lv(pc2));
        check(boosted, pc2, c->first);
        check(g, pc2, c->second);
        return;
      }
      case Command::Kind::Bracket: check(g, pc, c->first); return;
    }
  }
};

}  // namespace

ExprTyping type_expr(const SecurityEnv& env, const ExprPtr& e) { return type_in(Gamma{env, {}}, e); }

std::vector<TypeDiagnostic> type_command(const SecurityEnv& env, Level pc, const CmdPtr& c) {
  Checker ch;
  ch.check(Gamma{env, {}}, pc, c);
  return ch.out;
}

}  // namespace robustcheck
