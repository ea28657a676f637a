#include <gtest/gtest.h>

#include "robustcheck/attacks.hpp"
#include "robustcheck/errors.hpp"
#include "support.hpp"

using namespace robustcheck;

namespace {

std::vector<std::string> names(const std::vector<AttackVector>& as) {
  std::vector<std::string> out;
  for (const auto& a : as) out.push_back(attack_to_string(a));
  return out;
}

// Value of x after the attack command runs from m.
int final_value(const Program& p, const AttackVector& a, const Memory& m, const std::string& x) {
  OracleRun r = oracle_run(a.at(0), p.env, m, p.domain_size);
  int v = m[static_cast<size_t>(p.env.index(x))];
  for (const auto& e : r.prefix)
    if (e.kind == Event::Kind::Assign && e.var == p.env.index(x)) v = e.value;
  return v;
}

}  // namespace

TEST(Enumerate, SingleVariable) {
  Program p = prog("var u : public untrusted; var l : public trusted; [#]; l := u", 2);
  EXPECT_EQ(names(enumerate_attacks(p, {1, false})), (std::vector<std::string>{"skip", "u:=0", "u:=1"}));
  auto with_div = enumerate_attacks(p, {1, true});
  ASSERT_EQ(with_div.size(), 4u);
  EXPECT_EQ(attack_to_string(with_div.back()), "while 1 { skip; }");
}

TEST(Enumerate, NoHoles) {
  Program p = prog("var u : public untrusted; var l : public trusted; l := u", 2);
  auto as = enumerate_attacks(p, {2, true});
  ASSERT_EQ(as.size(), 1u);
  EXPECT_TRUE(as[0].empty());
  EXPECT_EQ(attack_to_string(as[0]), "-");
}

TEST(Enumerate, CountsAgainstBruteForce) {
  Program p = prog("var u, u2 : public untrusted; var l : public trusted; [#]; l := u", 2);
  auto as = enumerate_attacks(p, {2, false});
  EXPECT_EQ(as.size(), 1u + 4u + 16u);
  auto ns = names(as);
  EXPECT_EQ(std::set<std::string>(ns.begin(), ns.end()).size(), as.size());
  // every straight-line sequence of length <= 2 over {u,u2} x {0,1} shows up
  std::vector<std::string> atoms = {"u:=0", "u:=1", "u2:=0", "u2:=1"};
  for (const auto& a : atoms) {
    EXPECT_NE(std::find(ns.begin(), ns.end(), a), ns.end());
    for (const auto& b : atoms) EXPECT_NE(std::find(ns.begin(), ns.end(), a + "; " + b), ns.end());
  }
}

TEST(Enumerate, TwoHolesIndependent) {
  Program p = prog("var u : public untrusted; var l : public trusted; [#]; l := u; [#]", 2);
  auto as = enumerate_attacks(p, {1, false});
  EXPECT_EQ(as.size(), 9u);
  EXPECT_EQ(attack_to_string(as[5]), "u:=0 | u:=1");
}

TEST(Enumerate, OnlyUntrustedVariables) {
  Program p = prog("var u : secret untrusted; var t : public trusted; var h : secret trusted; [#]", 3);
  for (const auto& a : enumerate_attacks(p, {2, false})) {
    auto s = attack_to_string(a);
    EXPECT_EQ(s.find("t:="), std::string::npos);
    EXPECT_EQ(s.find("h:="), std::string::npos);
  }
}

TEST(Substitute, Examples) {
  Program p = prog("var u : public untrusted; var h : secret trusted; var low : public trusted; [#]; low := u < h", 8);
  CmdPtr a = ast::assign("u", ast::num(5));
  CmdPtr want = ast::seq(ast::bracket(a), ast::assign("low", ast::bin(BinOp::Lt, ast::var("u"), ast::var("h"))));
  EXPECT_TRUE(equal(substitute(p, {a}), want));
  EXPECT_THROW(substitute(p, {a, a}), ArityError);
  Program q = prog("var l : public trusted; l := 1");
  EXPECT_EQ(substitute(q, {}), q.body);
}

TEST(Fairness, GuardedHole) {
  Program p = prog("var h : secret trusted; var low : public untrusted; if h > 0 then [#] else skip", 4);
  EXPECT_TRUE(is_fair(p, {ast::assign("low", ast::num(1))}));
  EXPECT_TRUE(is_fair(p, {ast::assign("low", ast::bin(BinOp::Gt, ast::var("h"), ast::num(0)))}));
  EXPECT_FALSE(is_fair(p, {ast::assign("low", ast::var("h"))}));
  EXPECT_TRUE(is_fair(p, {ast::skip()}));
}

TEST(Fairness, TrustedWritesAreUnfair) {
  Program p = prog("var u : public untrusted; var t : public trusted; [#]; t := 1", 2);
  EXPECT_FALSE(is_fair(p, {ast::assign("t", ast::num(0))}));
  EXPECT_TRUE(is_fair(p, {ast::assign("u", ast::num(0))}));
}

TEST(Fairness, SkipIsFairOnCorpus) {
  for (const auto& f : corpus_files()) {
    Program p;
    try {
      p = prog(read_text(f));
    } catch (const Error&) {
      continue;
    }
    EXPECT_TRUE(is_fair(p, AttackVector(static_cast<size_t>(p.hole_count), ast::skip()))) << f;
  }
}

TEST(Irrelevant, NoEndorsementsGiveEmptySet) {
  Program p = prog("var u : public untrusted; var h : secret trusted; var low : public trusted; [#]; low := u < h", 4);
  Memory m{0, 3, 0};
  Trace tr = run(substitute(p, {ast::assign("u", ast::num(1))}), p.env, m, 4).prefix;
  EXPECT_TRUE(irrelevant_attacks(p, m, tr, {1, true}).empty());
  EXPECT_TRUE(irrelevant_attacks_checked(p, m, tr, {1, true}).empty());
}

TEST(Irrelevant, EndorsedComparison) {
  Program p = prog("var u : public untrusted; var h : secret trusted; var low : public trusted; [#]; low := endorse@a(u < h)", 8);
  Memory m{0, 7, 0};
  Trace tr = run(substitute(p, {ast::assign("u", ast::num(1))}), p.env, m, 8).prefix;
  auto got = irrelevant_attacks(p, m, tr, {1, false});
  std::vector<std::string> want;
  for (const auto& a : enumerate_attacks(p, {1, false}))
    if (final_value(p, a, m, "u") >= 7) want.push_back(attack_to_string(a));
  EXPECT_EQ(names(got), want);
  EXPECT_EQ(want, std::vector<std::string>{"u:=7"});
}

TEST(Irrelevant, EndorsedVariableBruteForce) {
  Program p = prog("var u : public untrusted; var t : public trusted; [#]; t := endorse@a(u)", 2);
  for (const auto& m : oracle_memories(p.env, 2)) {
    Trace tr = run(substitute(p, {ast::assign("u", ast::num(1))}), p.env, m, 2).prefix;
    std::vector<std::string> want;
    for (const auto& a : enumerate_attacks(p, {1, false}))
      if (final_value(p, a, m, "u") == 0) want.push_back(attack_to_string(a));
    EXPECT_EQ(names(irrelevant_attacks(p, m, tr, {1, false})), want);
  }
}

TEST(Irrelevant, CheckedExamples) {
  Program p = prog(
      "var u, u2 : public untrusted; var h : secret trusted; var low : public trusted;"
      "[#]; endorse@a(u) if u = u2 then low := declassify(u < h) else skip",
      8);
  Memory m{0, 0, 7, 0};
  CmdPtr a2 = ast::seq(ast::assign("u", ast::num(5)), ast::assign("u2", ast::num(5)));
  Trace tr = run(substitute(p, {a2}), p.env, m, 8).prefix;
  auto got = names(irrelevant_attacks_checked(p, m, tr, {2, false}));
  EXPECT_EQ(std::find(got.begin(), got.end(), "u:=5; u2:=0"), got.end());
  EXPECT_NE(std::find(got.begin(), got.end(), "u:=3; u2:=3"), got.end());
  // brute force over the universe: the single checked event decides
  int b0 = -1;
  for (const auto& e : tr)
    if (e.kind == Event::Kind::Checked) b0 = e.branch;
  ASSERT_EQ(b0, 1);
  std::vector<std::string> want;
  for (const auto& a : enumerate_attacks(p, {2, false})) {
    Trace t = run(substitute(p, a), p.env, m, 8).prefix;
    const Event* ck = nullptr;
    for (const auto& e : t)
      if (e.kind == Event::Kind::Checked) ck = &e;
    if (ck && ck->value != 5 && ck->branch + b0 >= 1) want.push_back(attack_to_string(a));
  }
  EXPECT_EQ(got, want);
}

TEST(Irrelevant, MonotoneInTrace) {
  Program p = prog(
      "var u : public untrusted; var t, t2 : public trusted;"
      "[#]; t := endorse@a(u); t2 := endorse@b(u + 1)",
      3);
  AttackConfig cfg{1, false};
  for (const auto& m : oracle_memories(p.env, 3)) {
    for (const auto& a : enumerate_attacks(p, cfg)) {
      Trace tr = run(substitute(p, a), p.env, m, 3).prefix;
      std::vector<std::string> prev;
      for (size_t n = 0; n <= tr.size(); ++n) {
        auto cur = names(irrelevant_attacks(p, m, Trace(tr.begin(), tr.begin() + static_cast<long>(n)), cfg));
        for (const auto& x : prev) EXPECT_NE(std::find(cur.begin(), cur.end(), x), cur.end());
        prev = cur;
      }
    }
  }
}

TEST(Irrelevant, OnlyFairAttacks) {
  Program p = prog("var h : secret trusted; var u : public untrusted; var t : public trusted; if h > 0 then [#] else skip; t := endorse(u)", 2);
  Memory m{1, 0, 0};
  Trace tr = run(substitute(p, {ast::assign("u", ast::num(1))}), p.env, m, 2).prefix;
  for (const auto& a : irrelevant_attacks(p, m, tr, {1, true})) EXPECT_TRUE(is_fair(p, a));
}

TEST(Irrelevant, Predicates) {
  std::vector<LabelledValue> tr{{0, 1, 0}, {1, 2, 0}};
  EXPECT_TRUE(irrelevant_direct(tr, 2, {{0, 0, 0}}));
  EXPECT_FALSE(irrelevant_direct(tr, 2, {{0, 1, 0}}));
  EXPECT_TRUE(irrelevant_direct(tr, 2, {{0, 1, 0}, {1, 3, 0}}));
  EXPECT_FALSE(irrelevant_direct(tr, 1, {{0, 1, 0}, {1, 3, 0}}));
  EXPECT_FALSE(irrelevant_direct(tr, 2, {{1, 0, 0}}));
  std::vector<LabelledValue> ck{{0, 5, 1}};
  EXPECT_TRUE(irrelevant_checked(ck, 1, {{0, 3, 0}}));
  EXPECT_FALSE(irrelevant_checked(ck, 1, {{0, 5, 0}}));
  EXPECT_FALSE(irrelevant_checked({{0, 5, 0}}, 1, {{0, 3, 0}}));
}
