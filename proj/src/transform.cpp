#include "robustcheck/transform.hpp"

#include "robustcheck/errors.hpp"

namespace robustcheck {

namespace {

CmdPtr with_children(const CmdPtr& c, CmdPtr first, CmdPtr second) {
  if (first == c->first && second == c->second) return c;
  auto n = std::make_shared<Command>(*c);
  n->first = std::move(first);
  n->second = std::move(second);
  return n;
}

CmdPtr reach_holes(const CmdPtr& c) {
  if (!c) return c;
  if (c->kind == Command::Kind::Hole) {
    auto bump = ast::assign(kReachVar, ast::bin(BinOp::Add, ast::var(kReachVar, c->span), ast::num(1, c->span), c->span),
                            c->span);
    return ast::seq(bump, c, c->span);
  }
  return with_children(c, reach_holes(c->first), reach_holes(c->second));
}

// Confidentiality of an expression; declassify makes its operand public.
Conf conf_of(const ExprPtr& e, const SecurityEnv& env) {
  switch (e->kind) {
    case Expr::Kind::Const: return Conf::Public;
    case Expr::Kind::Var: return env.level(e->name).conf;
    case Expr::Kind::Declassify: return Conf::Public;
    case Expr::Kind::BinOp:
      return (conf_of(e->lhs, env) == Conf::Secret || conf_of(e->rhs, env) == Conf::Secret) ? Conf::Secret
                                                                                               : Conf::Public;
  }
  return Conf::Public;
}

std::string sanitize(const std::string& label) {
  std::string out;
  for (char ch : label) out += (ch == '.') ? '_' : ch;
  return out;
}

struct Lowerer {
  const SecurityEnv& env;
  SecurityEnv& out_env;
  std::vector<LoweredEndorse>& table;
  int counter = 0;

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int k = 2; out_env.contains(name); ++k) name = base + "_" + std::to_string(k);
    return name;
  }

  CmdPtr lower(const CmdPtr& c) {
    if (!c) return c;
    if (c->kind != Command::Kind::Checked) return with_children(c, lower(c->first), lower(c->second));

    int k = ++counter;
    LoweredEndorse rec;
    rec.source_label = c->label;
    rec.cond_label = std::to_string(2 * k - 1);
    rec.var_label = std::to_string(2 * k);
    std::string stem = std::string(kTempPrefix) + sanitize(c->label);
    rec.cond_temp = fresh(stem + "_0");
    // written before any read, so the initial value is fixed
    out_env.declare(rec.cond_temp, Level{conf_of(c->expr, env), Integ::Trusted}, 0);
    rec.var_temp = fresh(stem + "_1");
    out_env.declare(rec.var_temp, Level{env.level(c->var).conf, Integ::Trusted}, 0);
    table.push_back(rec);

    auto then_branch = rename_reads(lower(c->first), c->var, rec.var_temp);
    auto else_branch = lower(c->second);
    Span s = c->span;
    auto t0 = ast::endorse(rec.cond_temp, rec.cond_label, c->expr, s);
    auto t1 = ast::endorse(rec.var_temp, rec.var_label, ast::var(c->var, s), s);
    return ast::seq(t0, ast::if_(ast::var(rec.cond_temp, s), ast::seq(t1, then_branch, s), else_branch, s), s);
  }
};

}  // namespace

Program treach(const Program& p) {
  if (p.env.contains(kReachVar)) throw ReservedVarError("variable 'reach' is reserved for reachability tracking");
  Program out = p;
  out.env.declare(kReachVar, kPublicTrusted, 0);
  out.body = reach_holes(p.body);
  return out;
}

ExprPtr rename_reads(const ExprPtr& e, const std::string& x, const std::string& y) {
  if (!e) return e;
  switch (e->kind) {
    case Expr::Kind::Const: return e;
    case Expr::Kind::Var: return e->name == x ? ast::var(y, e->span) : e;
    case Expr::Kind::Declassify: {
      auto inner = rename_reads(e->lhs, x, y);
      return inner == e->lhs ? e : ast::declassify(inner, e->span);
    }
    case Expr::Kind::BinOp: {
      auto l = rename_reads(e->lhs, x, y);
      auto r = rename_reads(e->rhs, x, y);
      return (l == e->lhs && r == e->rhs) ? e : ast::bin(e->op, l, r, e->span);
    }
  }
  return e;
}

CmdPtr rename_reads(const CmdPtr& c, const std::string& x, const std::string& y) {
  if (!c) return c;
  auto expr = rename_reads(c->expr, x, y);
  auto first = rename_reads(c->first, x, y);
  auto second = rename_reads(c->second, x, y);
  if (expr == c->expr && first == c->first && second == c->second) return c;
  auto n = std::make_shared<Command>(*c);
  n->expr = expr;
  n->first = first;
  n->second = second;
  return n;
}

Lowered lower_checked(const Program& p) {
  if (has_direct_endorse(p.body) && has_checked_endorse(p.body))
    throw UnsupportedConstruct("program mixes direct and checked endorsements");
  Lowered out;
  out.program = p;
  Lowerer l{p.env, out.program.env, out.endorsements};
  out.program.body = l.lower(p.body);
  return out;
}

}  // namespace robustcheck
