#include "robustcheck/semantics.hpp"

#include <sstream>
#include <unordered_map>

#include "robustcheck/errors.hpp"

namespace robustcheck {

const char* to_string(Mode m) { return m == Mode::PS ? "ps" : "pi"; }

namespace {

int apply(BinOp op, int a, int b, int N) {
  switch (op) {
    case BinOp::Add: return (a + b) % N;
    case BinOp::Sub: return ((a - b) % N + N) % N;
    case BinOp::Mul: return static_cast<int>((static_cast<long long>(a) * b) % N);
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    case BinOp::Lt: return a < b;
    case BinOp::Le: return a <= b;
    case BinOp::Gt: return a > b;
    case BinOp::Ge: return a >= b;
    case BinOp::And: return a != 0 && b != 0;
    case BinOp::Or: return a != 0 || b != 0;
  }
  return 0;
}

int var_index(const SecurityEnv& env, const std::string& x) {
  int i = env.index(x);
  if (i < 0) throw EnvError("undeclared variable '" + x + "'");
  return i;
}

}  // namespace

int eval_expr(const ExprPtr& e, const SecurityEnv& env, const Memory& m, int N) {
  switch (e->kind) {
    case Expr::Kind::Const: return e->value % N;
    case Expr::Kind::Var: return m[static_cast<size_t>(var_index(env, e->name))];
    case Expr::Kind::Declassify: return eval_expr(e->lhs, env, m, N);
    case Expr::Kind::BinOp:
      return apply(e->op, eval_expr(e->lhs, env, m, N), eval_expr(e->rhs, env, m, N), N);
  }
  return 0;
}

StepResult step(const CmdPtr& c, const SecurityEnv& env, const Memory& m, int N, bool in_attack) {
  if (!c) throw Error("step: configuration has already halted");
  StepResult r{nullptr, m, std::nullopt};
  switch (c->kind) {
    case Command::Kind::Skip: break;
    case Command::Kind::Assign: {
      int x = var_index(env, c->var);
      int v = eval_expr(c->expr, env, m, N);
      r.memory[static_cast<size_t>(x)] = v;
      r.event = Event::assign(x, v, in_attack);
      break;
    }
    case Command::Kind::Endorse: {
      int x = var_index(env, c->var);
      int v = eval_expr(c->expr, env, m, N);
      r.memory[static_cast<size_t>(x)] = v;
      r.event = Event::endorse(x, c->label, v, in_attack);
      break;
    }
    case Command::Kind::Seq: {
      auto s = step(c->first, env, m, N, in_attack);
      r.memory = std::move(s.memory);
      r.event = std::move(s.event);
      r.next = s.next ? ast::seq(s.next, c->second, c->span) : c->second;
      break;
    }
    case Command::Kind::If: r.next = eval_expr(c->expr, env, m, N) != 0 ? c->first : c->second; break;
    case Command::Kind::While:
      if (eval_expr(c->expr, env, m, N) != 0) r.next = ast::seq(c->first, c, c->span);
      break;
    case Command::Kind::Checked: {
      int x = var_index(env, c->var);
      int b = eval_expr(c->expr, env, m, N) != 0;
      r.event = Event::checked(x, c->label, m[static_cast<size_t>(x)], b);
      r.next = b ? c->first : c->second;
      break;
    }
    case Command::Kind::Bracket: {
      auto s = step(c->first, env, m, N, true);
      r.memory = std::move(s.memory);
      r.event = std::move(s.event);
      if (s.next) r.next = ast::bracket(s.next, c->span);
      break;
    }
    case Command::Kind::Hole: throw Error("step: program still contains a hole");
  }
  return r;
}

// ---- compiled machine ----

namespace {

struct Op {
  enum class Kind : std::uint8_t { Const, Var, Bin } kind;
  BinOp op;
  int arg;
};

using Code = std::vector<Op>;

void compile_expr(const ExprPtr& e, const SecurityEnv& env, int N, Code& out) {
  switch (e->kind) {
    case Expr::Kind::Const: out.push_back({Op::Kind::Const, BinOp::Add, e->value % N}); return;
    case Expr::Kind::Var: out.push_back({Op::Kind::Var, BinOp::Add, var_index(env, e->name)}); return;
    case Expr::Kind::Declassify: compile_expr(e->lhs, env, N, out); return;
    case Expr::Kind::BinOp:
      compile_expr(e->lhs, env, N, out);
      compile_expr(e->rhs, env, N, out);
      out.push_back({Op::Kind::Bin, e->op, 0});
      return;
  }
}

struct VecHash {
  size_t operator()(const std::vector<int>& v) const noexcept {
    size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x + 0x9e37)) * 1099511628211ull;
    return h;
  }
};

constexpr int kExit = -1;

}  // namespace

struct Machine::Impl {
  struct Node {
    Command::Kind kind;
    int var = -1;
    std::string label;
    Code code;
    int a = -1;
    int b = -1;
  };

  std::vector<Node> nodes;
  int root = -1;
  int N = 2;

  int build(const CmdPtr& c, const SecurityEnv& env) {
    Node n;
    n.kind = c->kind;
    if (c->kind == Command::Kind::Hole) throw Error("cannot run a program that still contains holes");
    if (!c->var.empty()) n.var = var_index(env, c->var);
    n.label = c->label;
    if (c->expr) compile_expr(c->expr, env, N, n.code);
    int id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    int a = c->first ? build(c->first, env) : -1;
    int b = c->second ? build(c->second, env) : -1;
    nodes[static_cast<size_t>(id)].a = a;
    nodes[static_cast<size_t>(id)].b = b;
    return id;
  }

  int eval(const Code& code, const Memory& m) const {
    int st[64];
    int sp = 0;
    std::vector<int> spill;  // deep expressions
    if (code.size() > 64) {
      spill.reserve(code.size());
      for (const Op& op : code) {
        if (op.kind == Op::Kind::Const) spill.push_back(op.arg);
        else if (op.kind == Op::Kind::Var) spill.push_back(m[static_cast<size_t>(op.arg)]);
        else {
          int r = spill.back();
          spill.pop_back();
          spill.back() = apply(op.op, spill.back(), r, N);
        }
      }
      return spill.back();
    }
    for (const Op& op : code) {
      switch (op.kind) {
        case Op::Kind::Const: st[sp++] = op.arg; break;
        case Op::Kind::Var: st[sp++] = m[static_cast<size_t>(op.arg)]; break;
        case Op::Kind::Bin:
          --sp;
          st[sp - 1] = apply(op.op, st[sp - 1], st[sp], N);
          break;
      }
    }
    return st[0];
  }

  RunResult run(const Memory& init) const {
    RunResult res;
    Memory m = init;
    Trace events;
    std::vector<BracketMark> marks;
    std::vector<size_t> open;
    std::vector<int> stack{root};
    int depth = 0;
    std::unordered_map<std::vector<int>, std::pair<size_t, size_t>, VecHash> seen;
    std::vector<int> key;

    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      if (f == kExit) {
        --depth;
        marks[open.back()].exit = events.size();
        open.pop_back();
        continue;
      }
      const Node& n = nodes[static_cast<size_t>(f)];
      switch (n.kind) {
        case Command::Kind::Skip: break;
        case Command::Kind::Assign: {
          int v = eval(n.code, m);
          m[static_cast<size_t>(n.var)] = v;
          events.push_back(Event::assign(n.var, v, depth > 0));
          break;
        }
        case Command::Kind::Endorse: {
          int v = eval(n.code, m);
          m[static_cast<size_t>(n.var)] = v;
          events.push_back(Event::endorse(n.var, n.label, v, depth > 0));
          break;
        }
        case Command::Kind::Seq:
          stack.push_back(n.b);
          stack.push_back(n.a);
          break;
        case Command::Kind::If: stack.push_back(eval(n.code, m) != 0 ? n.a : n.b); break;
        case Command::Kind::While: {
          key.assign(stack.begin(), stack.end());
          key.push_back(-2);
          key.push_back(f);
          key.insert(key.end(), m.begin(), m.end());
          auto [it, fresh] = seen.try_emplace(key, events.size(), marks.size());
          if (!fresh) {
            res.kind = RunResult::Kind::Diverged;
            size_t start = it->second.first;
            res.prefix.assign(events.begin(), events.begin() + static_cast<long>(start));
            res.lasso.assign(events.begin() + static_cast<long>(start), events.end());
            res.marks = std::move(marks);
            res.prefix_marks = it->second.second;
            return res;
          }
          if (eval(n.code, m) != 0) {
            stack.push_back(f);
            stack.push_back(n.a);
          }
          break;
        }
        case Command::Kind::Checked: {
          int b = eval(n.code, m) != 0;
          events.push_back(Event::checked(n.var, n.label, m[static_cast<size_t>(n.var)], b));
          stack.push_back(b ? n.a : n.b);
          break;
        }
        case Command::Kind::Bracket:
          open.push_back(marks.size());
          marks.push_back({events.size(), std::nullopt});
          ++depth;
          stack.push_back(kExit);
          stack.push_back(n.a);
          break;
        case Command::Kind::Hole: break;  // rejected at build time
      }
    }
    events.push_back(Event::term());
    res.kind = RunResult::Kind::Terminated;
    res.prefix = std::move(events);
    res.marks = std::move(marks);
    res.prefix_marks = res.marks.size();
    return res;
  }
};

Machine::Machine(const CmdPtr& c, const SecurityEnv& env, int N) : impl_(std::make_unique<Impl>()) {
  if (N < 2) throw Error("domain size must be at least 2");
  impl_->N = N;
  impl_->root = impl_->build(c ? c : ast::skip(), env);
}

Machine::~Machine() = default;
Machine::Machine(Machine&&) noexcept = default;
Machine& Machine::operator=(Machine&&) noexcept = default;

RunResult Machine::run(const Memory& m) const { return impl_->run(m); }

RunResult run(const CmdPtr& c, const SecurityEnv& env, const Memory& m, int N) { return Machine(c, env, N).run(m); }

// ---- projections and printing ----

Trace low_projection(const Trace& tr, const SecurityEnv& env, Mode mode) {
  Trace out;
  for (const auto& e : tr) {
    switch (e.kind) {
      case Event::Kind::Assign:
      case Event::Kind::Endorse:
        if (is_public(env.level(e.var))) out.push_back(e);
        break;
      case Event::Kind::Term: out.push_back(e); break;
      case Event::Kind::Div:
        if (mode == Mode::PS) out.push_back(e);
        break;
      case Event::Kind::Checked: break;
    }
  }
  return out;
}

Trace trusted_projection(const Trace& tr, const SecurityEnv& env) {
  Trace out;
  for (const auto& e : tr) {
    if (e.kind == Event::Kind::Term) out.push_back(e);
    else if ((e.kind == Event::Kind::Assign || e.kind == Event::Kind::Endorse) && is_trusted(env.level(e.var)))
      out.push_back(e);
  }
  return out;
}

Trace full_trace(const RunResult& r) {
  Trace t = r.prefix;
  t.insert(t.end(), r.lasso.begin(), r.lasso.end());
  if (r.diverged()) t.push_back(Event::div());
  return t;
}

std::string event_to_string(const Event& e, const SecurityEnv& env) {
  auto name = [&](int x) { return x >= 0 && static_cast<size_t>(x) < env.size() ? env.vars()[static_cast<size_t>(x)].name : "?"; };
  switch (e.kind) {
    case Event::Kind::Assign: return "(" + name(e.var) + "," + std::to_string(e.value) + ")";
    case Event::Kind::Endorse:
      return "endorse(" + e.label + "," + std::to_string(e.value) + ")->" + name(e.var);
    case Event::Kind::Checked:
      return "checked(" + e.label + "," + std::to_string(e.value) + "," + std::to_string(e.branch) + ")";
    case Event::Kind::Term: return "term";
    case Event::Kind::Div: return "div";
  }
  return "?";
}

std::string dump_trace(const Trace& tr, const SecurityEnv& env) {
  std::string out;
  for (const auto& e : tr) {
    if (e.in_attack) out += "[a] ";
    out += event_to_string(e, env);
    out += '\n';
  }
  return out;
}

// ---- memory space ----

MemorySpace::MemorySpace(const SecurityEnv& env, int N) : N_(N), base_(env.size(), 0) {
  const auto& vars = env.vars();
  for (size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].pinned) {
      base_[i] = *vars[i].pinned % N;
      continue;
    }
    if (is_public(vars[i].level)) public_.push_back(static_cast<int>(i));
    else secret_.push_back(static_cast<int>(i));
  }
  for (size_t k = 0; k < public_.size(); ++k) public_count_ *= static_cast<size_t>(N);
  for (size_t k = 0; k < secret_.size(); ++k) secret_count_ *= static_cast<size_t>(N);
}

Memory MemorySpace::compose(size_t pub, size_t sec) const {
  Memory m = base_;
  for (size_t k = public_.size(); k-- > 0;) {
    m[static_cast<size_t>(public_[k])] = static_cast<int>(pub % static_cast<size_t>(N_));
    pub /= static_cast<size_t>(N_);
  }
  for (size_t k = secret_.size(); k-- > 0;) {
    m[static_cast<size_t>(secret_[k])] = static_cast<int>(sec % static_cast<size_t>(N_));
    sec /= static_cast<size_t>(N_);
  }
  return m;
}

size_t MemorySpace::public_index(const Memory& m) const {
  size_t idx = 0;
  for (int v : public_) idx = idx * static_cast<size_t>(N_) + static_cast<size_t>(m[static_cast<size_t>(v)]);
  return idx;
}

size_t MemorySpace::secret_index(const Memory& m) const {
  size_t idx = 0;
  for (int v : secret_) idx = idx * static_cast<size_t>(N_) + static_cast<size_t>(m[static_cast<size_t>(v)]);
  return idx;
}

Memory parse_memory(const std::string& spec, const SecurityEnv& env, int N) {
  Memory m(env.size(), 0);
  for (size_t i = 0; i < env.size(); ++i)
    if (env.vars()[i].pinned) m[i] = *env.vars()[i].pinned % N;
  std::string s = spec;
  for (char& c : s)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(s);
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("memory entry '" + item + "' is not of the form name=value");
    std::string name = item.substr(0, eq);
    int idx = env.index(name);
    if (idx < 0) throw EnvError("undeclared variable '" + name + "'");
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error("bad value in memory entry '" + item + "'");
    }
    if (v < 0 || v >= N) throw Error("value of '" + name + "' outside 0.." + std::to_string(N - 1));
    m[static_cast<size_t>(idx)] = v;
  }
  return m;
}

std::string memory_to_string(const Memory& m, const SecurityEnv& env) {
  std::string out;
  for (size_t i = 0; i < env.size(); ++i) {
    if (i) out += ',';
    out += env.vars()[i].name + "=" + std::to_string(m[i]);
  }
  return out;
}

}  // namespace robustcheck
