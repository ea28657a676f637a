#include "robustcheck/report.hpp"

namespace robustcheck {

namespace {

Json span_json(Span s) { return Json{{"line", s.line}, {"col", s.col}}; }

const char* expr_kind(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Const: return "const";
    case Expr::Kind::Var: return "var";
    case Expr::Kind::BinOp: return "binop";
    case Expr::Kind::Declassify: return "declassify";
  }
  return "?";
}

const char* cmd_kind(Command::Kind k) {
  switch (k) {
    case Command::Kind::Skip: return "skip";
    case Command::Kind::Assign: return "assign";
    case Command::Kind::Seq: return "seq";
    case Command::Kind::If: return "if";
    case Command::Kind::While: return "while";
    case Command::Kind::Hole: return "hole";
    case Command::Kind::Endorse: return "endorse";
    case Command::Kind::Checked: return "checked";
    case Command::Kind::Bracket: return "bracket";
  }
  return "?";
}

}  // namespace

Json expr_json(const ExprPtr& e) {
  Json j;
  j["kind"] = expr_kind(e->kind);
  j["span"] = span_json(e->span);
  switch (e->kind) {
    case Expr::Kind::Const: j["value"] = e->value; break;
    case Expr::Kind::Var: j["name"] = e->name; break;
    case Expr::Kind::BinOp:
      j["op"] = op_symbol(e->op);
      j["children"] = Json::array({expr_json(e->lhs), expr_json(e->rhs)});
      break;
    case Expr::Kind::Declassify: j["children"] = Json::array({expr_json(e->lhs)}); break;
  }
  return j;
}

Json command_json(const CmdPtr& c) {
  Json j;
  j["kind"] = cmd_kind(c->kind);
  j["span"] = span_json(c->span);
  switch (c->kind) {
    case Command::Kind::Skip: break;
    case Command::Kind::Assign:
      j["var"] = c->var;
      j["children"] = Json::array({expr_json(c->expr)});
      break;
    case Command::Kind::Seq: j["children"] = Json::array({command_json(c->first), command_json(c->second)}); break;
    case Command::Kind::If:
      j["children"] = Json::array({expr_json(c->expr), command_json(c->first), command_json(c->second)});
      break;
    case Command::Kind::While: j["children"] = Json::array({expr_json(c->expr), command_json(c->first)}); break;
    case Command::Kind::Hole: j["index"] = c->hole; break;
    case Command::Kind::Endorse:
      j["var"] = c->var;
      j["label"] = c->label;
      j["children"] = Json::array({expr_json(c->expr)});
      break;
    case Command::Kind::Checked:
      j["var"] = c->var;
      j["label"] = c->label;
      j["children"] = Json::array({expr_json(c->expr), command_json(c->first), command_json(c->second)});
      break;
    case Command::Kind::Bracket: j["children"] = Json::array({command_json(c->first)}); break;
  }
  return j;
}

Json program_json(const Program& p) {
  Json vars = Json::array();
  for (const auto& d : p.env.vars()) {
    Json v{{"name", d.name}, {"level", short_name(d.level)}};
    if (d.pinned) v["pinned"] = *d.pinned;
    vars.push_back(std::move(v));
  }
  return Json{{"vars", std::move(vars)}, {"holes", p.hole_count}, {"body", command_json(p.body)}};
}

Json diagnostic_json(const TypeDiagnostic& d) {
  return Json{{"rule", d.rule}, {"premise", d.premise}, {"span", span_json(d.span)}, {"message", d.message}};
}

Json diagnostics_json(const std::vector<TypeDiagnostic>& ds) {
  Json a = Json::array();
  for (const auto& d : ds) a.push_back(diagnostic_json(d));
  return a;
}

std::vector<std::string> trace_lines(const Trace& tr, const SecurityEnv& env) {
  std::vector<std::string> out;
  out.reserve(tr.size());
  for (const auto& e : tr) out.push_back((e.in_attack ? "[a] " : "") + event_to_string(e, env));
  return out;
}

Json universe_json(const Universe& u) {
  return Json{{"N", u.domain},
              {"attack_len", u.attack_len},
              {"diverge_attack", u.diverge},
              {"memories", u.memories},
              {"attacks", u.attacks},
              {"fair_attacks", u.fair_attacks}};
}

Json witness_json(const Program& p, const Witness& w) {
  return Json{{"memory", memory_to_string(w.memory, p.env)},
              {"attack", attack_to_string(w.attack)},
              {"offending", attack_to_string(w.offending)},
              {"position", w.position},
              {"clause", w.clause},
              {"attack_trace", trace_lines(w.attack_trace, p.env)},
              {"offending_trace", trace_lines(w.offending_trace, p.env)}};
}

Json verdict_json(const Program& p, const Verdict& v) {
  Json j{{"status", v.accept ? "accept" : "reject"},
         {"property", to_string(v.property)},
         {"mode", to_string(v.mode)},
         {"universe", universe_json(v.universe)},
         {"release_points", v.release_points}};
  j["witness"] = v.witness ? witness_json(p, *v.witness) : Json(nullptr);
  return j;
}

}  // namespace robustcheck
