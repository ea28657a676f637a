#include "robustcheck/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "robustcheck/errors.hpp"
#include "robustcheck/parser.hpp"
#include "robustcheck/transform.hpp"

namespace robustcheck {

namespace fs = std::filesystem;

namespace {

struct Options {
  bool json = false;
  bool timing = false;
  std::string file;
  std::string mode = "ps";
  std::string property = "robustness";
  int domain = 4;
  int attack_len = -1;
  bool diverge = false;
  bool no_diverge = false;
  bool emit_lowered = false;
  std::string memory;
  size_t attack_index = 0;
  size_t limit = 16;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load(const Options& o) { return parse_program(read_file(o.file), {false, o.domain}); }

Json header(const std::string& command, const std::string& file) {
  return Json{{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"file", file}};
}

void merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

std::string span_text(Span s) { return std::to_string(s.line) + ":" + std::to_string(s.col); }

Outcome do_typecheck(const Options& o) {
  Program p = load(o);
  auto ds = type_program(p);
  Outcome r;
  r.code = ds.empty() ? 0 : 1;
  r.json = header("typecheck", o.file);
  r.json["status"] = ds.empty() ? "accept" : "reject";
  r.json["diagnostics"] = diagnostics_json(ds);
  if (ds.empty()) r.text = "well-typed\n";
  for (const auto& d : ds)
    r.text += o.file + ":" + span_text(d.span) + ": " + d.rule + " [" + d.premise + "] " + d.message + "\n";
  return r;
}

std::string verdict_text(const Program& p, const Verdict& v) {
  std::string t = std::string(v.accept ? "accept" : "reject") + " (" + to_string(v.property) + ", " +
                  to_string(v.mode) + ", N=" + std::to_string(v.universe.domain) +
                  ", attack_len=" + std::to_string(v.universe.attack_len) +
                  (v.universe.diverge ? ", diverge" : "") + ", " + std::to_string(v.universe.fair_attacks) + "/" +
                  std::to_string(v.universe.attacks) + " fair attacks)\n";
  if (!v.witness) return t;
  const Witness& w = *v.witness;
  t += "  memory:    " + memory_to_string(w.memory, p.env) + "\n";
  t += "  attack:    " + attack_to_string(w.attack) + "\n";
  t += "  offending: " + attack_to_string(w.offending) + "\n";
  t += "  position:  " + std::to_string(w.position) + "\n";
  t += "  clause:    " + w.clause + "\n";
  t += "  attack trace:\n";
  for (const auto& l : trace_lines(w.attack_trace, p.env)) t += "    " + l + "\n";
  t += "  offending trace:\n";
  for (const auto& l : trace_lines(w.offending_trace, p.env)) t += "    " + l + "\n";
  return t;
}

Outcome do_check(const Options& o) {
  Program p = load(o);
  Mode mode = o.mode == "pi" ? Mode::PI : Mode::PS;
  Property prop = *property_from_string(o.property);
  AttackConfig cfg;
  cfg.max_len = o.attack_len >= 0 ? o.attack_len : static_cast<int>(p.env.untrusted_vars().size());
  cfg.include_diverge = o.diverge || (mode == Mode::PS && !o.no_diverge);

  Outcome r;
  Program target = p;
  bool lowered = false;
  if (has_checked_endorse(p.body) && (prop == Property::Integrity || o.emit_lowered)) {
    Lowered lw = lower_checked(p);
    if (o.emit_lowered) r.text += to_source(lw.program);
    if (prop == Property::Integrity) {
      target = lw.program;
      lowered = true;
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  Verdict v = check(target, prop, mode, cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  r.code = v.accept ? 0 : 1;
  r.json = header("check", o.file);
  merge(r.json, verdict_json(target, v));
  r.json["lowered"] = lowered;
  if (o.timing) r.json["wall_time_s"] = secs;
  r.text += verdict_text(target, v);
  if (o.timing) r.text += "  wall time: " + std::to_string(secs) + " s\n";
  return r;
}

Outcome do_lower(const Options& o) {
  Program p = load(o);
  Lowered lw = lower_checked(p);
  Outcome r;
  r.json = header("lower", o.file);
  Json map = Json::array();
  for (const auto& e : lw.endorsements)
    map.push_back(Json{{"source_label", e.source_label},
                       {"cond_label", e.cond_label},
                       {"var_label", e.var_label},
                       {"cond_temp", e.cond_temp},
                       {"var_temp", e.var_temp}});
  r.json["endorsements"] = std::move(map);
  r.json["source"] = to_source(lw.program);
  r.json["program"] = program_json(lw.program);
  r.text = to_source(lw.program);
  return r;
}

Outcome do_treach(const Options& o) {
  Program t = treach(load(o));
  Outcome r;
  r.json = header("treach", o.file);
  r.json["source"] = to_source(t);
  r.json["program"] = program_json(t);
  r.text = to_source(t);
  return r;
}

Outcome do_ast(const Options& o) {
  Program p = load(o);
  Outcome r;
  r.json = header("ast", o.file);
  r.json["program"] = program_json(p);
  r.text = r.json["program"].dump(2) + "\n";
  return r;
}

Json memory_set_json(const MemorySet& ms, const SecurityEnv& env, size_t limit) {
  Json a = Json::array();
  for (size_t i = 0; i < ms.size() && i < limit; ++i) a.push_back(memory_to_string(ms[i], env));
  return a;
}

Outcome do_knowledge(const Options& o) {
  Program p = load(o);
  Mode mode = o.mode == "pi" ? Mode::PI : Mode::PS;
  AttackConfig cfg{static_cast<int>(p.env.untrusted_vars().size()), mode == Mode::PS};
  auto attacks = enumerate_attacks(p, cfg);
  if (o.attack_index >= attacks.size())
    throw Error("attack index " + std::to_string(o.attack_index) + " out of range (" +
                std::to_string(attacks.size()) + " attacks)");
  const AttackVector& a = attacks[o.attack_index];
  Memory m = parse_memory(o.memory, p.env, p.domain_size);
  CmdPtr c = substitute(p, a);
  RunResult run_result = run(c, p.env, m, p.domain_size);
  Trace low = low_projection(full_trace(run_result), p.env, mode);

  Outcome r;
  r.json = header("knowledge", o.file);
  r.json["mode"] = to_string(mode);
  r.json["memory"] = memory_to_string(m, p.env);
  r.json["attack"] = attack_to_string(a);
  r.json["trace"] = trace_lines(full_trace(run_result), p.env);
  r.text = "memory: " + memory_to_string(m, p.env) + "\nattack: " + attack_to_string(a) + "\ntrace:\n";
  for (const auto& l : trace_lines(full_trace(run_result), p.env)) r.text += "  " + l + "\n";

  Json steps = Json::array();
  MemorySet prev;
  for (size_t i = 0; i <= low.size(); ++i) {
    Trace li(low.begin(), low.begin() + static_cast<long>(i));
    MemorySet k = knowledge(c, p.env, p.domain_size, m, li, mode);
    MemorySet kp = progress_knowledge(c, p.env, p.domain_size, m, li, mode);
    bool release = false;
    if (i > 0) {
      Trace lp(low.begin(), low.begin() + static_cast<long>(i - 1));
      MemorySet before = mode == Mode::PS ? knowledge(c, p.env, p.domain_size, m, lp, mode)
                                          : progress_knowledge(c, p.env, p.domain_size, m, lp, mode);
      release = before.size() > k.size();
    }
    Json s{{"after", i},
           {"event", i == 0 ? Json(nullptr) : Json(event_to_string(low[i - 1], p.env))},
           {"release", release},
           {"k_size", k.size()},
           {"kprog_size", kp.size()},
           {"k", memory_set_json(k, p.env, o.limit)}};
    steps.push_back(std::move(s));
    r.text += "after " + std::to_string(i) + (i ? " " + event_to_string(low[i - 1], p.env) : std::string()) +
              (release ? " [release]" : "") + ": |k|=" + std::to_string(k.size()) +
              " |k->|=" + std::to_string(kp.size()) + "\n";
    for (size_t x = 0; x < k.size() && x < o.limit; ++x) r.text += "    " + memory_to_string(k[x], p.env) + "\n";
    if (k.size() > o.limit) r.text += "    ... " + std::to_string(k.size() - o.limit) + " more\n";
  }
  r.json["steps"] = std::move(steps);
  return r;
}

Outcome do_corpus(const Options& o);

// Builds the parser, parses args and dispatches. Throws CLI::ParseError.
Outcome dispatch(std::vector<std::string> args, std::string* help) {
  Options o;
  CLI::App app{"Robustness checker for a small imperative language with holes", kToolName};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Print a JSON report");
  app.add_flag("--timing", o.timing, "Record wall time in reports");

  auto file_arg = [&](CLI::App* s) { s->add_option("file", o.file, "Program file (.ifc)")->required(); };
  auto domain_opt = [&](CLI::App* s) {
    s->add_option("--domain", o.domain, "Values range over 0..N-1")->check(CLI::Range(2, 64));
  };
  auto mode_opt = [&](CLI::App* s) {
    s->add_option("--mode", o.mode, "Progress-sensitive or progress-insensitive")->check(CLI::IsMember({"ps", "pi"}));
  };

  auto* tc = app.add_subcommand("typecheck", "Run the security type system");
  file_arg(tc);
  domain_opt(tc);

  auto* ck = app.add_subcommand("check", "Semantic robustness check over the finite universe");
  file_arg(ck);
  mode_opt(ck);
  domain_opt(ck);
  ck->add_option("--property", o.property, "Property to check")
      ->check(CLI::IsMember({"robustness", "robustness-endorse", "robustness-checked", "integrity"}));
  ck->add_option("--attack-len", o.attack_len, "Longest assignment sequence per hole")->check(CLI::Range(0, 8));
  auto* dv = ck->add_flag("--diverge-attack", o.diverge, "Include the diverging attack");
  ck->add_flag("--no-diverge-attack", o.no_diverge, "Exclude the diverging attack")->excludes(dv);
  ck->add_flag("--emit-lowered", o.emit_lowered, "Print the lowered program first");

  auto* lw = app.add_subcommand("lower", "Lower checked endorsements to direct ones");
  file_arg(lw);
  lw->add_flag("--emit-lowered", o.emit_lowered, "Print the lowered program (default)");

  auto* tr = app.add_subcommand("treach", "Make hole reachability explicit");
  file_arg(tr);

  auto* as = app.add_subcommand("ast", "Dump the parsed program");
  file_arg(as);

  auto* kn = app.add_subcommand("knowledge", "Attacker knowledge along one run");
  file_arg(kn);
  mode_opt(kn);
  domain_opt(kn);
  kn->add_option("--memory", o.memory, "Initial memory, e.g. h=7,u=1")->required();
  kn->add_option("--attack-index", o.attack_index, "Index into the attack enumeration (0 = skip)");
  kn->add_option("--limit", o.limit, "Memories listed per knowledge set");

  auto* cp = app.add_subcommand("corpus", "Check every .ifc file against its expect: lines");
  cp->add_option("dir", o.file, "Corpus directory")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    *help = app.help();
    throw;
  } catch (const CLI::CallForAllHelp&) {
    *help = app.help("", CLI::AppFormatMode::All);
    throw;
  }

  Outcome r;
  if (*tc) r = do_typecheck(o);
  else if (*ck) r = do_check(o);
  else if (*lw) r = do_lower(o);
  else if (*tr) r = do_treach(o);
  else if (*as) r = do_ast(o);
  else if (*kn) r = do_knowledge(o);
  else r = do_corpus(o);
  if (o.json) r.text = r.json.dump(2) + "\n";
  return r;
}

Outcome error_outcome(const std::string& msg) {
  Outcome r;
  r.code = 2;
  r.json = Json{{"tool", kToolName}, {"version", kToolVersion}, {"status", "error"}, {"message", msg}};
  r.text = msg + "\n";
  return r;
}

Outcome do_corpus(const Options& o) {
  std::vector<fs::path> files;
  if (!fs::is_directory(o.file)) throw Error("not a directory: " + o.file);
  for (const auto& entry : fs::directory_iterator(o.file))
    if (entry.is_regular_file() && entry.path().extension() == ".ifc") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  Json records = Json::array();
  size_t total = 0, passed = 0;
  std::string table;
  for (const auto& f : files) {
    std::string name = f.filename().generic_string();
    std::vector<Expectation> exps;
    try {
      exps = parse_expectations(read_file(f.string()));
    } catch (const Error& e) {
      exps.clear();
    }
    Json checks = Json::array();
    bool file_ok = !exps.empty();
    for (const auto& e : exps) {
      std::vector<std::string> args = e.args;
      args.insert(args.begin() + 1, f.string());
      if (o.timing) args.push_back("--timing");
      Outcome out;
      try {
        std::string help;
        out = dispatch(args, &help);
      } catch (const CLI::ParseError& pe) {
        out = error_outcome(pe.what());
      } catch (const Error& err) {
        out = error_outcome(err.what());
      }
      std::string actual = out.code == 2 ? "error" : out.code == 0 ? "accept" : "reject";
      bool ok = actual == e.status;
      if (ok && !e.rule.empty()) {
        ok = false;
        for (const auto& d : out.json["diagnostics"])
          if (d["rule"] == e.rule) ok = true;
      }
      ++total;
      if (ok) ++passed;
      file_ok = file_ok && ok;
      std::string cmd;
      for (const auto& a : e.args) cmd += (cmd.empty() ? "" : " ") + a;
      std::string expected = e.status + (e.rule.empty() ? "" : " " + e.rule);
      Json result = out.json;
      result.erase("tool");
      result.erase("version");
      result.erase("file");
      checks.push_back(Json{{"line", e.line},
                            {"args", cmd},
                            {"expected", expected},
                            {"actual", actual},
                            {"pass", ok},
                            {"result", std::move(result)}});
      char row[512];
      std::snprintf(row, sizeof row, "%-30s %-66s %-18s %-7s %s\n", name.c_str(), cmd.c_str(), expected.c_str(),
                    actual.c_str(), ok ? "ok" : "FAIL");
      table += row;
    }
    if (exps.empty()) {
      char row[512];
      std::snprintf(row, sizeof row, "%-30s %-66s %-18s %-7s %s\n", name.c_str(), "(no expect: lines)", "-", "-",
                    "FAIL");
      table += row;
    }
    records.push_back(Json{{"file", name}, {"pass", file_ok}, {"checks", std::move(checks)}});
  }

  Outcome r;
  bool all = passed == total && records.size() == files.size();
  for (const auto& rec : records) all = all && rec["pass"].get<bool>();
  r.code = all ? 0 : 1;
  r.json = Json{{"tool", kToolName},
                {"version", kToolVersion},
                {"command", "corpus"},
                {"dir", fs::path(o.file).filename().generic_string()},
                {"files", std::move(records)},
                {"summary", Json{{"files", files.size()}, {"checks", total}, {"passed", passed}, {"failed", total - passed}}}};
  char head[512];
  std::snprintf(head, sizeof head, "%-30s %-66s %-18s %-7s %s\n", "file", "check", "expected", "actual", "");
  r.text = head + table + std::to_string(passed) + "/" + std::to_string(total) + " checks passed\n";
  return r;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

std::vector<Expectation> parse_expectations(const std::string& text) {
  std::vector<Expectation> out;
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    auto at = line.find("// expect:");
    if (at == std::string::npos) continue;
    std::string body = line.substr(at + 10);
    auto arrow = body.find("=>");
    if (arrow == std::string::npos) throw Error("line " + std::to_string(n) + ": expect line without =>");
    Expectation e;
    e.line = n;
    e.args = split_ws(body.substr(0, arrow));
    auto res = split_ws(body.substr(arrow + 2));
    if (e.args.empty() || res.empty() || res.size() > 2) throw Error("line " + std::to_string(n) + ": malformed expect line");
    e.status = res[0];
    if (res.size() == 2) e.rule = res[1];
    if (e.status != "accept" && e.status != "reject" && e.status != "error")
      throw Error("line " + std::to_string(n) + ": unknown expected result " + e.status);
    out.push_back(std::move(e));
  }
  return out;
}

Outcome execute(const std::vector<std::string>& args) {
  std::string help;
  try {
    return dispatch(args, &help);
  } catch (const CLI::CallForHelp&) {
    Outcome r;
    r.text = help;
    return r;
  } catch (const CLI::CallForAllHelp&) {
    Outcome r;
    r.text = help;
    return r;
  } catch (const CLI::ParseError& e) {
    return error_outcome(std::string("usage: ") + e.what());
  } catch (const ParseError& e) {
    return error_outcome("parse error: " + std::string(e.what()));
  } catch (const Error& e) {
    return error_outcome("error: " + std::string(e.what()));
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Outcome r = execute(args);
  bool json = std::find(args.begin(), args.end(), "--json") != args.end();
  if (r.code != 2) out << r.text;
  else if (json) out << r.json.dump(2) << "\n";
  else err << r.text;
  return r.code;
}

}  // namespace robustcheck
