#include <gtest/gtest.h>

#include <random>

#include "robustcheck/attacks.hpp"
#include "robustcheck/robustness.hpp"
#include "robustcheck/transform.hpp"
#include "support.hpp"

using namespace robustcheck;

namespace {

CmdPtr bump() { return ast::assign("reach", ast::bin(BinOp::Add, ast::var("reach"), ast::num(1))); }

// Assignments to program variables and termination, in order.
std::vector<std::pair<std::string, int>> visible(const Trace& tr, const SecurityEnv& env) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& e : tr) {
    if (e.kind == Event::Kind::Term) out.emplace_back("term", 0);
    if (e.kind != Event::Kind::Assign && e.kind != Event::Kind::Endorse) continue;
    const std::string& x = env.vars()[static_cast<size_t>(e.var)].name;
    if (x.rfind("__chk_", 0) == 0) continue;
    out.emplace_back(x, e.value);
  }
  return out;
}

std::vector<CmdPtr> flatten(const CmdPtr& c) {
  if (c->kind != Command::Kind::Seq) return {c};
  auto a = flatten(c->first), b = flatten(c->second);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Program corpus(const std::string& name, int N = 2) { return prog(read_text(std::string(CORPUS_DIR) + "/" + name), N); }

}  // namespace

TEST(Treach, Examples) {
  Program hole = prog("var u : public untrusted; [#]");
  Program th = treach(hole);
  EXPECT_TRUE(equal(th.body, ast::seq(bump(), ast::hole(0))));
  const VarDecl& r = th.env.vars()[static_cast<size_t>(th.env.index("reach"))];
  EXPECT_EQ(r.level, kPublicTrusted);
  EXPECT_EQ(r.pinned, std::optional<int>(0));
  EXPECT_EQ(th.hole_count, 1);

  Program sk = prog("var u : public untrusted; skip");
  EXPECT_TRUE(equal(treach(sk).body, sk.body));

  Program guarded = prog("var h : secret trusted; var u : public untrusted; if h > 0 then [#] else skip");
  CmdPtr want = ast::if_(ast::bin(BinOp::Gt, ast::var("h"), ast::num(0)), ast::seq(bump(), ast::hole(0)), ast::skip());
  EXPECT_TRUE(equal(treach(guarded).body, want));

  Program loop = prog("var u : public untrusted; while u do { [#]; [#] }");
  CmdPtr body = ast::seq(ast::seq(bump(), ast::hole(0)), ast::seq(bump(), ast::hole(1)));
  EXPECT_TRUE(equal(treach(loop).body, ast::while_(ast::var("u"), body)));
}

TEST(Treach, ReservedName) {
  EXPECT_THROW(treach(prog("var reach : public trusted; var u : public untrusted; [#]")), ReservedVarError);
}

TEST(Treach, ErasingReachGivesOriginalTrace) {
  std::mt19937 rng(13);
  AttackConfig cfg{1, true};
  for (int iter = 0; iter < 40; ++iter) {
    std::string src = random_program(rng, true);
    src.insert(src.find("untrusted;\n") + 11, iter % 2 ? "[#];\n" : "if l then [#] else skip;\n");
    Program p = prog(src, 2);
    Program tp = treach(p);
    const int reach = tp.env.index("reach");
    for (const auto& a : enumerate_attacks(p, cfg)) {
      for (const auto& m : oracle_memories(p.env, 2)) {
        Memory tm = m;
        tm.insert(tm.begin() + reach, 0);
        OracleRun o = oracle_run(substitute(p, a), p.env, m, 2);
        OracleRun t = oracle_run(substitute(tp, a), tp.env, tm, 2);
        auto erase = [&](Trace tr) {
          Trace out;
          for (auto e : tr) {
            if (e.var == reach && e.kind == Event::Kind::Assign) continue;
            if (e.var > reach) --e.var;
            out.push_back(e);
          }
          return out;
        };
        Trace full_t = erase(t.prefix);
        Trace full_o = o.prefix;
        // reach only grows, so a lasso of the treach program may have a
        // longer prefix; compare a long unrolled window instead
        Trace cyc_t = erase(t.cycle);
        for (size_t k = 0; k < 3 && t.diverged; ++k) full_t.insert(full_t.end(), cyc_t.begin(), cyc_t.end());
        for (size_t k = 0; k < 3 && o.diverged; ++k) full_o.insert(full_o.end(), o.cycle.begin(), o.cycle.end());
        size_t n = std::min(full_t.size(), full_o.size());
        ASSERT_EQ(o.diverged, t.diverged) << src;
        if (!o.diverged) {
          EXPECT_EQ(full_t, full_o) << src;
        } else {
          EXPECT_TRUE(std::equal(full_t.begin(), full_t.begin() + static_cast<long>(n), full_o.begin())) << src;
        }
      }
    }
  }
}

TEST(Lower, UncheckedWitnessProgram) {
  Program p = corpus("unchecked_guard.ifc");
  Lowered l = lower_checked(p);
  ASSERT_EQ(l.endorsements.size(), 1u);
  const auto& e = l.endorsements[0];
  EXPECT_EQ(e.cond_label, "1");
  EXPECT_EQ(e.var_label, "2");
  EXPECT_EQ(e.cond_temp, "__chk_" + e.source_label + "_0");
  EXPECT_EQ(e.var_temp, "__chk_" + e.source_label + "_1");
  const auto& env = l.program.env;
  EXPECT_EQ(env.level(env.index(e.cond_temp)), kPublicTrusted);  // u = u2 is public
  EXPECT_EQ(env.level(env.index(e.var_temp)), kPublicTrusted);
  EXPECT_FALSE(has_checked_endorse(l.program.body));
  EXPECT_EQ(endorse_labels(l.program.body), (std::vector<std::string>{"1", "2"}));
  // [#]; t0 := endorse(u = u2); if t0 then { t1 := endorse(u); low := declassify(t1 < h) } else skip
  CmdPtr want = ast::seq(
      ast::hole(0),
      ast::seq(ast::endorse(e.cond_temp, "1", ast::bin(BinOp::Eq, ast::var("u"), ast::var("u2"))),
               ast::if_(ast::var(e.cond_temp),
                        ast::seq(ast::endorse(e.var_temp, "2", ast::var("u")),
                                 ast::assign("low", ast::declassify(ast::bin(BinOp::Lt, ast::var(e.var_temp), ast::var("h"))))),
                        ast::skip())));
  EXPECT_TRUE(equal(l.program.body, want)) << to_source(l.program);
}

TEST(Lower, SecretVariableGetsSecretTemporary) {
  Program p = corpus("password_update.ifc");
  Lowered l = lower_checked(p);
  ASSERT_EQ(l.endorsements.size(), 2u);
  EXPECT_EQ(endorse_labels(l.program.body), (std::vector<std::string>{"1", "2", "3", "4"}));
  const auto& env = l.program.env;
  EXPECT_EQ(env.level(env.index(l.endorsements[0].var_temp)), kPublicTrusted);  // guess
  EXPECT_EQ(env.level(env.index(l.endorsements[1].var_temp)), kSecretTrusted);  // new_password
  EXPECT_EQ(env.level(env.index(l.endorsements[0].cond_temp)), kPublicTrusted);  // declassified guard
}

TEST(Lower, IdentityWithoutChecks) {
  Program p = prog("var l : public trusted; skip");
  EXPECT_TRUE(equal(lower_checked(p).program.body, p.body));
  Program q = prog("var u : public untrusted; var l : public trusted; [#]; while u do l := u");
  EXPECT_TRUE(equal(lower_checked(q).program.body, q.body));
  EXPECT_TRUE(lower_checked(q).endorsements.empty());
}

TEST(Lower, MixedEndorsementsRejected) {
  Program p = prog("var u, u2 : public untrusted; var t : public trusted; [#]; t := endorse(u); endorse(u2) if u2 then skip else skip");
  EXPECT_THROW(lower_checked(p), UnsupportedConstruct);
}

TEST(Lower, RenameReads) {
  auto e = rename_reads(ast::bin(BinOp::Add, ast::var("x"), ast::declassify(ast::var("x"))), "x", "y");
  EXPECT_EQ(to_source(e), "y + declassify(y)");
  auto c = rename_reads(ast::assign("x", ast::var("x")), "x", "y");
  EXPECT_EQ(c->var, "x");
  EXPECT_EQ(to_source(c->expr), "y");
}

TEST(Lower, PreservesNonEndorseBehaviour) {
  AttackConfig cfg{1, false};
  for (const char* f : {"password_update.ifc", "embargo.ifc", "unchecked_guard.ifc", "occlusion.ifc"}) {
    Program p = corpus(f);
    Lowered l = lower_checked(p);
    for (const auto& a : enumerate_attacks(p, cfg))
      for (const auto& m : oracle_memories(p.env, 2)) {
        Memory lm = m;
        lm.resize(l.program.env.size(), 0);
        OracleRun src = oracle_run(substitute(p, a), p.env, m, 2);
        OracleRun low = oracle_run(substitute(l.program, a), l.program.env, lm, 2);
        ASSERT_EQ(src.diverged, low.diverged);
        EXPECT_EQ(visible(src.prefix, p.env), visible(low.prefix, l.program.env)) << f;
      }
  }
}

TEST(Lower, OcclusionStaysVisible) {
  // the lowering endorses the check result itself, so the later untrusted
  // write to a trusted variable is still caught
  Program p = corpus("occlusion.ifc");
  Lowered l = lower_checked(p);
  ASSERT_EQ(l.endorsements.size(), 1u);
  auto stmts = flatten(l.program.body);
  ASSERT_GE(stmts.size(), 3u);
  EXPECT_EQ(stmts[0]->kind, Command::Kind::Hole);
  EXPECT_EQ(stmts[1]->kind, Command::Kind::Endorse);
  EXPECT_EQ(stmts[1]->var, l.endorsements[0].cond_temp);
  EXPECT_FALSE(check_integrity_robustness(l.program, {1, false}).accept);
}
