#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "robustcheck/lattice.hpp"

namespace robustcheck {

struct Span {
  int line = 0;
  int col = 0;
};

enum class BinOp { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* op_symbol(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Const, Var, BinOp, Declassify };

  Kind kind = Kind::Const;
  int value = 0;
  std::string name;
  BinOp op = BinOp::Add;
  ExprPtr lhs;  // operand of Declassify
  ExprPtr rhs;
  Span span;
};

struct Command;
using CmdPtr = std::shared_ptr<const Command>;

// Immutable command tree. A null CmdPtr stands for the terminated command
// (halt) in the small-step semantics only; parsed programs never contain it.
struct Command {
  enum class Kind { Skip, Assign, Seq, If, While, Hole, Endorse, Checked, Bracket };

  Kind kind = Kind::Skip;
  std::string var;    // target of Assign/Endorse, endorsed variable of Checked
  std::string label;  // Endorse, Checked
  ExprPtr expr;       // rhs or guard
  CmdPtr first;       // Seq lhs, then-branch, loop body, bracket body
  CmdPtr second;      // Seq rhs, else-branch
  int hole = -1;
  Span span;
};

namespace ast {

ExprPtr num(int v, Span s = {});
ExprPtr var(std::string name, Span s = {});
ExprPtr bin(BinOp op, ExprPtr a, ExprPtr b, Span s = {});
ExprPtr declassify(ExprPtr e, Span s = {});

CmdPtr skip(Span s = {});
CmdPtr assign(std::string x, ExprPtr e, Span s = {});
CmdPtr seq(CmdPtr a, CmdPtr b, Span s = {});
// Right-nested sequence; empty list yields skip.
CmdPtr seq(const std::vector<CmdPtr>& cs);
CmdPtr if_(ExprPtr e, CmdPtr t, CmdPtr f, Span s = {});
CmdPtr while_(ExprPtr e, CmdPtr body, Span s = {});
CmdPtr hole(int index, Span s = {});
CmdPtr endorse(std::string x, std::string label, ExprPtr e, Span s = {});
CmdPtr checked(std::string label, std::string x, ExprPtr e, CmdPtr t, CmdPtr f, Span s = {});
CmdPtr bracket(CmdPtr body, Span s = {});

}  // namespace ast

// Structural equality, spans ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const CmdPtr& a, const CmdPtr& b);

void collect_vars(const ExprPtr& e, std::set<std::string>& out);
std::set<std::string> vars_of(const ExprPtr& e);
bool contains_declassify(const ExprPtr& e);

int count_holes(const CmdPtr& c);
// Labels of Endorse and Checked nodes in pre-order.
std::vector<std::string> endorse_labels(const CmdPtr& c);
bool has_direct_endorse(const CmdPtr& c);
bool has_checked_endorse(const CmdPtr& c);

struct VarDecl {
  std::string name;
  Level level;
  std::optional<int> pinned;  // fixed initial value, if any
};

class SecurityEnv {
 public:
  // Throws EnvError on redeclaration.
  void declare(const std::string& name, Level level, std::optional<int> pinned = std::nullopt);

  bool contains(const std::string& name) const;
  // -1 when absent.
  int index(const std::string& name) const;
  // Throws EnvError when absent.
  Level level(const std::string& name) const;
  Level level(int idx) const { return vars_[static_cast<size_t>(idx)].level; }

  const std::vector<VarDecl>& vars() const { return vars_; }
  size_t size() const { return vars_.size(); }

  std::vector<std::string> untrusted_vars() const;
  std::vector<std::string> public_vars() const;

 private:
  std::vector<VarDecl> vars_;
  std::unordered_map<std::string, int> index_;
};

struct Program {
  SecurityEnv env;
  CmdPtr body;
  int hole_count = 0;
  int domain_size = 4;
};

inline constexpr const char* kReachVar = "reach";
inline constexpr const char* kTempPrefix = "__chk_";

std::string to_source(const ExprPtr& e);
// Statement list, one per line, indented by `indent` levels.
std::string to_source(const CmdPtr& c, int indent = 0);
std::string to_source(const Program& p);

}  // namespace robustcheck
