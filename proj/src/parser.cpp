#include "robustcheck/parser.hpp"

#include <cctype>
#include <set>
#include <unordered_map>

#include "robustcheck/errors.hpp"

namespace robustcheck {

namespace {

// Placeholder prefix for labels chosen after the whole program is seen.
constexpr char kAutoMark = '\x01';

enum class Tok { Ident, Number, Sym, Hole, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int value = 0;
  Span span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.span = {line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                    src_[pos_] == '\''))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      t.kind = Tok::Number;
      t.text = std::string(src_.substr(start, pos_ - start));
      if (t.text.size() > 9) throw ParseError("integer literal too large", t.span.line, t.span.col);
      t.value = std::stoi(t.text);
      return t;
    }
    if (src_.substr(pos_, 3) == "[#]") {
      advance(3);
      t.kind = Tok::Hole;
      t.text = "[#]";
      return t;
    }
    static const char* two[] = {":=", "==", "!=", "<=", ">=", "&&", "||"};
    for (const char* s : two) {
      if (src_.substr(pos_, 2) == s) {
        advance(2);
        t.kind = Tok::Sym;
        t.text = s;
        return t;
      }
    }
    static const std::string one = "(){};:,=<>+-*@";
    if (one.find(c) != std::string::npos) {
      advance();
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  // Raw label right after '@'.
  Token label() {
    Token t;
    t.span = {line_, col_};
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '.'))
      advance();
    if (pos_ == start) throw ParseError("expected endorsement label after '@'", t.span.line, t.span.col);
    t.kind = Tok::Ident;
    t.text = std::string(src_.substr(start, pos_ - start));
    return t;
  }

 private:
  void advance(size_t n = 1) {
    for (size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      break;
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"var",   "if",      "then",    "else",     "while", "do",
                                          "skip",  "endorse", "declassify", "true", "false", "and",
                                          "or",    "public",  "secret",  "trusted",  "untrusted"};
  return k;
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : lex_(src), opts_(opts) {
    cur_ = lex_.next();
  }

  Program run() {
    Program p;
    p.domain_size = opts_.domain_size;
    while (is_ident("var")) declaration(p.env);
    env_ = &p.env;
    auto body = statements(/*in_block=*/false);
    if (cur_.kind != Tok::End) fail("unexpected '" + cur_.text + "'");
    p.body = resolve_labels(body);
    p.hole_count = holes_;
    return p;
  }

 private:
  // ---- token helpers ----

  void shift() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur_.span.line, cur_.span.col); }

  bool is_sym(const char* s) const { return cur_.kind == Tok::Sym && cur_.text == s; }
  bool is_ident(const char* s) const { return cur_.kind == Tok::Ident && cur_.text == s; }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'" + found());
    shift();
  }

  void expect_ident(const char* s) {
    if (!is_ident(s)) fail(std::string("expected '") + s + "'" + found());
    shift();
  }

  std::string found() const {
    if (cur_.kind == Tok::End) return " but reached end of input";
    return " but found '" + cur_.text + "'";
  }

  std::string name() {
    if (cur_.kind != Tok::Ident || keywords().count(cur_.text)) fail("expected identifier" + found());
    std::string n = cur_.text;
    shift();
    return n;
  }

  std::string use_var(const Token& at) {
    if (!env_->contains(at.text)) throw EnvError(pos(at.span) + "undeclared variable '" + at.text + "'");
    return at.text;
  }

  static std::string pos(Span s) { return std::to_string(s.line) + ":" + std::to_string(s.col) + ": "; }

  // ---- declarations ----

  void declaration(SecurityEnv& env) {
    expect_ident("var");
    std::vector<Token> names;
    for (;;) {
      Token t = cur_;
      name();
      names.push_back(t);
      if (!is_sym(",")) break;
      shift();
    }
    expect_sym(":");
    Level lvl;
    if (is_ident("public")) lvl.conf = Conf::Public;
    else if (is_ident("secret")) lvl.conf = Conf::Secret;
    else fail("expected 'public' or 'secret'" + found());
    shift();
    if (is_ident("trusted")) lvl.integ = Integ::Trusted;
    else if (is_ident("untrusted")) lvl.integ = Integ::Untrusted;
    else fail("expected 'trusted' or 'untrusted'" + found());
    shift();
    expect_sym(";");
    for (const auto& t : names) {
      if (!opts_.allow_reserved_temporaries && t.text.rfind(kTempPrefix, 0) == 0)
        throw EnvError(pos(t.span) + "name '" + t.text + "' uses the reserved prefix " + kTempPrefix);
      if (env.contains(t.text)) throw EnvError(pos(t.span) + "variable '" + t.text + "' declared twice");
      env.declare(t.text, lvl);
    }
  }

  // ---- statements ----

  bool at_list_end(bool in_block) const {
    if (cur_.kind == Tok::End) return true;
    return in_block && is_sym("}");
  }

  CmdPtr statements(bool in_block) {
    std::vector<CmdPtr> out;
    while (!at_list_end(in_block)) {
      if (is_sym(";")) {
        shift();
        continue;
      }
      bool braced = false;
      out.push_back(statement(braced));
      if (is_sym(";")) {
        shift();
      } else if (!braced && !at_list_end(in_block)) {
        fail("expected ';'" + found());
      }
    }
    return ast::seq(out);
  }

  // Block or single statement; `braced` reports whether it ended with '}'.
  CmdPtr statement(bool& braced) {
    Span at = cur_.span;
    braced = false;
    if (is_sym("{")) {
      shift();
      auto body = statements(true);
      expect_sym("}");
      braced = true;
      return body;
    }
    if (cur_.kind == Tok::Hole) {
      shift();
      return ast::hole(holes_++, at);
    }
    if (is_ident("skip")) {
      shift();
      return ast::skip(at);
    }
    if (is_ident("if")) {
      shift();
      auto guard = expression(Ctx::Guard);
      auto [t, f] = branches(braced);
      return ast::if_(guard, t, f, at);
    }
    if (is_ident("while")) {
      shift();
      auto guard = expression(Ctx::Guard);
      CmdPtr body;
      if (is_ident("do")) {
        shift();
        body = statement(braced);
      } else {
        if (!is_sym("{")) fail("expected 'do' or '{'" + found());
        body = statement(braced);
      }
      return ast::while_(guard, body, at);
    }
    if (is_ident("endorse")) return checked_endorse(braced);
    if (cur_.kind == Tok::Ident && !keywords().count(cur_.text)) {
      Token target = cur_;
      shift();
      expect_sym(":=");
      std::string x = use_var(target);
      if (is_ident("endorse")) {
        Span es = cur_.span;
        shift();
        std::string label = optional_label();
        expect_sym("(");
        auto e = expression(Ctx::Operand);
        expect_sym(")");
        return ast::endorse(x, label, e, es);
      }
      return ast::assign(x, expression(Ctx::Operand), at);
    }
    fail("expected statement" + found());
  }

  std::pair<CmdPtr, CmdPtr> branches(bool& braced) {
    CmdPtr t;
    if (is_ident("then")) {
      shift();
      t = statement(braced);
    } else {
      if (!is_sym("{")) fail("expected 'then' or '{'" + found());
      t = statement(braced);
    }
    CmdPtr f;
    if (is_ident("else")) {
      shift();
      f = statement(braced);
    } else {
      f = ast::skip(cur_.span);
    }
    return {t, f};
  }

  std::string optional_label() {
    if (!is_sym("@")) return std::string(1, kAutoMark) + std::to_string(auto_count_++);
    // No lookahead is buffered, so the lexer sits right after '@'.
    std::string label = lex_.label().text;
    shift();
    return label;
  }

  CmdPtr checked_endorse(bool& braced) {
    Span at = cur_.span;
    shift();
    std::string label = optional_label();
    expect_sym("(");
    std::vector<std::pair<std::string, Span>> xs;
    for (;;) {
      Token t = cur_;
      name();
      xs.push_back({use_var(t), t.span});
      if (!is_sym(",")) break;
      shift();
    }
    expect_sym(")");
    expect_ident("if");
    auto guard = expression(Ctx::Operand);
    auto [t, f] = branches(braced);
    if (xs.size() == 1) return ast::checked(label, xs[0].first, guard, t, f, at);
    // Check the condition first, then endorse the remaining variables
    // under a trivially true guard.
    CmdPtr inner = t;
    for (size_t i = xs.size(); i-- > 1;) {
      inner = ast::checked(label + "." + std::to_string(i + 1), xs[i].first, ast::num(1, at), inner, ast::skip(at),
                           xs[i].second);
    }
    return ast::checked(label + ".1", xs[0].first, guard, inner, f, at);
  }

  // ---- expressions ----

  enum class Ctx { Guard, Operand, Nested };

  ExprPtr expression(Ctx ctx) { return binary(1, ctx); }

  static int prec_of(const Token& t, BinOp& op) {
    if (t.kind == Tok::Ident) {
      if (t.text == "or") return op = BinOp::Or, 1;
      if (t.text == "and") return op = BinOp::And, 2;
      return 0;
    }
    if (t.kind != Tok::Sym) return 0;
    const std::string& s = t.text;
    if (s == "||") return op = BinOp::Or, 1;
    if (s == "&&") return op = BinOp::And, 2;
    if (s == "=" || s == "==") return op = BinOp::Eq, 3;
    if (s == "!=") return op = BinOp::Ne, 3;
    if (s == "<") return op = BinOp::Lt, 3;
    if (s == "<=") return op = BinOp::Le, 3;
    if (s == ">") return op = BinOp::Gt, 3;
    if (s == ">=") return op = BinOp::Ge, 3;
    if (s == "+") return op = BinOp::Add, 4;
    if (s == "-") return op = BinOp::Sub, 4;
    if (s == "*") return op = BinOp::Mul, 5;
    return 0;
  }

  ExprPtr binary(int min_prec, Ctx ctx) {
    auto lhs = primary(ctx);
    for (;;) {
      BinOp op{};
      int p = prec_of(cur_, op);
      if (p == 0 || p < min_prec) return lhs;
      Span at = cur_.span;
      shift();
      auto rhs = binary(p + 1, ctx);
      lhs = ast::bin(op, lhs, rhs, at);
      if (p == 3) {
        BinOp again{};
        if (prec_of(cur_, again) == 3) fail("comparison operators do not chain");
      }
    }
  }

  ExprPtr primary(Ctx ctx) {
    Span at = cur_.span;
    if (cur_.kind == Tok::Number) {
      int v = cur_.value;
      shift();
      return ast::num(v, at);
    }
    if (is_sym("(")) {
      shift();
      auto e = binary(1, ctx);
      expect_sym(")");
      return e;
    }
    if (is_ident("true") || is_ident("false")) {
      int v = is_ident("true") ? 1 : 0;
      shift();
      return ast::num(v, at);
    }
    if (is_ident("declassify")) {
      if (ctx == Ctx::Guard) fail("declassify is not allowed in if/while guards");
      if (ctx == Ctx::Nested) fail("declassify cannot be nested");
      shift();
      expect_sym("(");
      auto e = binary(1, Ctx::Nested);
      expect_sym(")");
      return ast::declassify(e, at);
    }
    if (cur_.kind == Tok::Ident && !keywords().count(cur_.text)) {
      Token t = cur_;
      shift();
      return ast::var(use_var(t), at);
    }
    fail("expected expression" + found());
  }

  // ---- label resolution ----

  void collect_explicit(const CmdPtr& c, std::set<std::string>& used) {
    if (!c) return;
    if ((c->kind == Command::Kind::Endorse || c->kind == Command::Kind::Checked) && c->label[0] != kAutoMark) {
      if (!used.insert(c->label).second) throw LabelError(pos(c->span) + "duplicate endorsement label '" + c->label + "'");
    }
    collect_explicit(c->first, used);
    collect_explicit(c->second, used);
  }

  CmdPtr resolve_labels(const CmdPtr& body) {
    std::set<std::string> used;
    collect_explicit(body, used);
    std::unordered_map<std::string, std::string> chosen;
    // Visit in program order so auto labels number left to right.
    return rewrite_in_order(body, used, chosen);
  }

  CmdPtr rewrite_in_order(const CmdPtr& c, std::set<std::string>& used,
                          std::unordered_map<std::string, std::string>& chosen) {
    if (!c) return c;
    std::shared_ptr<Command> n;
    if ((c->kind == Command::Kind::Endorse || c->kind == Command::Kind::Checked) && !c->label.empty() &&
        c->label[0] == kAutoMark) {
      n = std::make_shared<Command>(*c);
      auto dot = c->label.find('.');
      std::string key = c->label.substr(0, dot);
      std::string suffix = dot == std::string::npos ? "" : c->label.substr(dot);
      auto it = chosen.find(key);
      if (it == chosen.end()) {
        int k = 1;
        auto clashes = [&](const std::string& base) {
          for (const auto& u : used)
            if (u == base || u.rfind(base + ".", 0) == 0) return true;
          return false;
        };
        while (clashes("e" + std::to_string(k))) ++k;
        it = chosen.emplace(key, "e" + std::to_string(k)).first;
      }
      n->label = it->second + suffix;
      used.insert(n->label);
    }
    auto first = rewrite_in_order(c->first, used, chosen);
    auto second = rewrite_in_order(c->second, used, chosen);
    if (!n && first == c->first && second == c->second) return c;
    if (!n) n = std::make_shared<Command>(*c);
    n->first = first;
    n->second = second;
    return n;
  }

  Lexer lex_;
  ParseOptions opts_;
  Token cur_;
  SecurityEnv* env_ = nullptr;
  int holes_ = 0;
  int auto_count_ = 0;
};

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& opts) {
  if (opts.domain_size < 2) throw Error("domain size must be at least 2");
  return Parser(text, opts).run();
}

}  // namespace robustcheck
