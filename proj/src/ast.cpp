#include "robustcheck/ast.hpp"

#include <sstream>

#include "robustcheck/errors.hpp"

namespace robustcheck {

const char* op_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

namespace ast {

ExprPtr num(int v, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Const;
  e->value = v;
  e->span = s;
  return e;
}

ExprPtr var(std::string name, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  e->span = s;
  return e;
}

ExprPtr bin(BinOp op, ExprPtr a, ExprPtr b, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::BinOp;
  e->op = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  e->span = s;
  return e;
}

ExprPtr declassify(ExprPtr inner, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Declassify;
  e->lhs = std::move(inner);
  e->span = s;
  return e;
}

namespace {
std::shared_ptr<Command> make(Command::Kind k, Span s) {
  auto c = std::make_shared<Command>();
  c->kind = k;
  c->span = s;
  return c;
}
}  // namespace

CmdPtr skip(Span s) { return make(Command::Kind::Skip, s); }

CmdPtr assign(std::string x, ExprPtr e, Span s) {
  auto c = make(Command::Kind::Assign, s);
  c->var = std::move(x);
  c->expr = std::move(e);
  return c;
}

CmdPtr seq(CmdPtr a, CmdPtr b, Span s) {
  auto c = make(Command::Kind::Seq, s);
  c->first = std::move(a);
  c->second = std::move(b);
  return c;
}

CmdPtr seq(const std::vector<CmdPtr>& cs) {
  if (cs.empty()) return skip();
  CmdPtr acc = cs.back();
  for (size_t i = cs.size() - 1; i-- > 0;) acc = seq(cs[i], acc, cs[i]->span);
  return acc;
}

CmdPtr if_(ExprPtr e, CmdPtr t, CmdPtr f, Span s) {
  auto c = make(Command::Kind::If, s);
  c->expr = std::move(e);
  c->first = std::move(t);
  c->second = std::move(f);
  return c;
}

CmdPtr while_(ExprPtr e, CmdPtr body, Span s) {
  auto c = make(Command::Kind::While, s);
  c->expr = std::move(e);
  c->first = std::move(body);
  return c;
}

CmdPtr hole(int index, Span s) {
  auto c = make(Command::Kind::Hole, s);
  c->hole = index;
  return c;
}

CmdPtr endorse(std::string x, std::string label, ExprPtr e, Span s) {
  auto c = make(Command::Kind::Endorse, s);
  c->var = std::move(x);
  c->label = std::move(label);
  c->expr = std::move(e);
  return c;
}

CmdPtr checked(std::string label, std::string x, ExprPtr e, CmdPtr t, CmdPtr f, Span s) {
  auto c = make(Command::Kind::Checked, s);
  c->label = std::move(label);
  c->var = std::move(x);
  c->expr = std::move(e);
  c->first = std::move(t);
  c->second = std::move(f);
  return c;
}

CmdPtr bracket(CmdPtr body, Span s) {
  auto c = make(Command::Kind::Bracket, s);
  c->first = std::move(body);
  return c;
}

}  // namespace ast

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const: return a.value == b.value;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::BinOp: return a.op == b.op && equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
    case Expr::Kind::Declassify: return equal(a.lhs, b.lhs);
  }
  return false;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

bool equal(const CmdPtr& a, const CmdPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  return a->var == b->var && a->label == b->label && a->hole == b->hole && equal(a->expr, b->expr) &&
         equal(a->first, b->first) && equal(a->second, b->second);
}

void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case Expr::Kind::Const: break;
    case Expr::Kind::Var: out.insert(e->name); break;
    case Expr::Kind::BinOp:
      collect_vars(e->lhs, out);
      collect_vars(e->rhs, out);
      break;
    case Expr::Kind::Declassify: collect_vars(e->lhs, out); break;
  }
}

std::set<std::string> vars_of(const ExprPtr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool contains_declassify(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Declassify) return true;
  return contains_declassify(e->lhs) || contains_declassify(e->rhs);
}

int count_holes(const CmdPtr& c) {
  if (!c) return 0;
  if (c->kind == Command::Kind::Hole) return 1;
  return count_holes(c->first) + count_holes(c->second);
}

namespace {
void labels_into(const CmdPtr& c, std::vector<std::string>& out) {
  if (!c) return;
  if (c->kind == Command::Kind::Endorse || c->kind == Command::Kind::Checked) out.push_back(c->label);
  labels_into(c->first, out);
  labels_into(c->second, out);
}

bool any_of_kind(const CmdPtr& c, Command::Kind k) {
  if (!c) return false;
  return c->kind == k || any_of_kind(c->first, k) || any_of_kind(c->second, k);
}
}  // namespace

std::vector<std::string> endorse_labels(const CmdPtr& c) {
  std::vector<std::string> out;
  labels_into(c, out);
  return out;
}

bool has_direct_endorse(const CmdPtr& c) { return any_of_kind(c, Command::Kind::Endorse); }
bool has_checked_endorse(const CmdPtr& c) { return any_of_kind(c, Command::Kind::Checked); }

void SecurityEnv::declare(const std::string& name, Level level, std::optional<int> pinned) {
  if (index_.count(name)) throw EnvError("variable '" + name + "' declared twice");
  index_.emplace(name, static_cast<int>(vars_.size()));
  vars_.push_back({name, level, pinned});
}

bool SecurityEnv::contains(const std::string& name) const { return index_.count(name) != 0; }

int SecurityEnv::index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

Level SecurityEnv::level(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw EnvError("undeclared variable '" + name + "'");
  return vars_[static_cast<size_t>(it->second)].level;
}

std::vector<std::string> SecurityEnv::untrusted_vars() const {
  std::vector<std::string> out;
  for (const auto& v : vars_)
    if (!is_trusted(v.level)) out.push_back(v.name);
  return out;
}

std::vector<std::string> SecurityEnv::public_vars() const {
  std::vector<std::string> out;
  for (const auto& v : vars_)
    if (is_public(v.level)) out.push_back(v.name);
  return out;
}

// ---- printing ----

namespace {

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 3;
    case BinOp::Add:
    case BinOp::Sub: return 4;
    case BinOp::Mul: return 5;
  }
  return 0;
}

void print_expr(std::ostream& os, const ExprPtr& e, int ctx, bool right) {
  switch (e->kind) {
    case Expr::Kind::Const: os << e->value; return;
    case Expr::Kind::Var: os << e->name; return;
    case Expr::Kind::Declassify:
      os << "declassify(";
      print_expr(os, e->lhs, 0, false);
      os << ')';
      return;
    case Expr::Kind::BinOp: {
      int p = precedence(e->op);
      // left-associative, comparisons do not chain
      bool parens = p < ctx || (p == ctx && (right || p == 3));
      if (parens) os << '(';
      print_expr(os, e->lhs, p, false);
      os << ' ' << op_symbol(e->op) << ' ';
      print_expr(os, e->rhs, p, true);
      if (parens) os << ')';
      return;
    }
  }
}

void pad(std::ostream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << "  ";
}

void print_cmd(std::ostream& os, const CmdPtr& c, int indent);

void print_block(std::ostream& os, const CmdPtr& c, int indent) {
  os << "{\n";
  print_cmd(os, c, indent + 1);
  pad(os, indent);
  os << '}';
}

void print_cmd(std::ostream& os, const CmdPtr& c, int indent) {
  if (!c) {
    pad(os, indent);
    os << "skip;\n";
    return;
  }
  switch (c->kind) {
    case Command::Kind::Seq:
      if (c->first && c->first->kind == Command::Kind::Seq) {
        pad(os, indent);
        print_block(os, c->first, indent);
        os << '\n';
      } else {
        print_cmd(os, c->first, indent);
      }
      print_cmd(os, c->second, indent);
      return;
    case Command::Kind::Skip:
      pad(os, indent);
      os << "skip;\n";
      return;
    case Command::Kind::Assign:
      pad(os, indent);
      os << c->var << " := " << to_source(c->expr) << ";\n";
      return;
    case Command::Kind::Hole:
      pad(os, indent);
      os << "[#];\n";
      return;
    case Command::Kind::Endorse:
      pad(os, indent);
      os << c->var << " := endorse@" << c->label << '(' << to_source(c->expr) << ");\n";
      return;
    case Command::Kind::If:
      pad(os, indent);
      os << "if " << to_source(c->expr) << ' ';
      print_block(os, c->first, indent);
      os << " else ";
      print_block(os, c->second, indent);
      os << '\n';
      return;
    case Command::Kind::While:
      pad(os, indent);
      os << "while " << to_source(c->expr) << ' ';
      print_block(os, c->first, indent);
      os << '\n';
      return;
    case Command::Kind::Checked:
      pad(os, indent);
      os << "endorse@" << c->label << '(' << c->var << ") if " << to_source(c->expr) << ' ';
      print_block(os, c->first, indent);
      os << " else ";
      print_block(os, c->second, indent);
      os << '\n';
      return;
    case Command::Kind::Bracket:
      pad(os, indent);
      os << "[[\n";
      print_cmd(os, c->first, indent + 1);
      pad(os, indent);
      os << "]]\n";
      return;
  }
}

}  // namespace

std::string to_source(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0, false);
  return os.str();
}

std::string to_source(const CmdPtr& c, int indent) {
  std::ostringstream os;
  print_cmd(os, c, indent);
  return os.str();
}

std::string to_source(const Program& p) {
  std::ostringstream os;
  for (const auto& v : p.env.vars()) os << "var " << v.name << " : " << to_string(v.level) << ";\n";
  os << to_source(p.body);
  return os.str();
}

}  // namespace robustcheck
