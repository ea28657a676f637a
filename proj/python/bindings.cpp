#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robustcheck/cli.hpp"
#include "robustcheck/errors.hpp"
#include "robustcheck/knowledge.hpp"
#include "robustcheck/parser.hpp"
#include "robustcheck/report.hpp"
#include "robustcheck/robustness.hpp"
#include "robustcheck/transform.hpp"
#include "robustcheck/typecheck.hpp"

namespace py = pybind11;
using namespace robustcheck;

namespace {

Mode parse_mode(const std::string& s) {
  if (s == "ps") return Mode::PS;
  if (s == "pi") return Mode::PI;
  throw Error("unknown mode '" + s + "' (expected ps or pi)");
}

// JSON crosses the boundary as text; the Python side decodes it.
std::string check_json(const std::string& source, const std::string& property, const std::string& mode_name,
                       int domain, int attack_len, std::optional<bool> diverge) {
  Program p = parse_program(source, {false, domain});
  Mode mode = parse_mode(mode_name);
  auto prop = property_from_string(property);
  if (!prop) throw Error("unknown property '" + property + "'");
  AttackConfig cfg;
  cfg.max_len = attack_len >= 0 ? attack_len : static_cast<int>(p.env.untrusted_vars().size());
  cfg.include_diverge = diverge.value_or(mode == Mode::PS);
  Program target = p;
  if (*prop == Property::Integrity && has_checked_endorse(p.body)) target = lower_checked(p).program;
  return verdict_json(target, check(target, *prop, mode, cfg)).dump();
}

std::string typecheck_json(const std::string& source, int domain) {
  Program p = parse_program(source, {false, domain});
  return diagnostics_json(type_program(p)).dump();
}

std::string lower_source(const std::string& source, int domain) {
  return to_source(lower_checked(parse_program(source, {false, domain})).program);
}

std::vector<std::string> run_trace(const std::string& source, const std::string& memory, int domain) {
  Program p = parse_program(source, {false, domain});
  if (p.hole_count) throw Error("fill the holes before running (program has " + std::to_string(p.hole_count) + ")");
  Memory m = parse_memory(memory, p.env, domain);
  return trace_lines(full_trace(run(p.body, p.env, m, domain)), p.env);
}

// Knowledge after the first `after` low events of the run from `memory`.
std::vector<std::string> knowledge_after(const std::string& source, const std::string& memory, size_t after,
                                         const std::string& mode_name, int domain, bool progress) {
  Program p = parse_program(source, {false, domain});
  if (p.hole_count) throw Error("fill the holes before asking for knowledge");
  Mode mode = parse_mode(mode_name);
  Memory m = parse_memory(memory, p.env, domain);
  Trace low = low_projection(full_trace(run(p.body, p.env, m, domain)), p.env, mode);
  if (after > low.size())
    throw Error("run has only " + std::to_string(low.size()) + " low events");
  Trace pre(low.begin(), low.begin() + static_cast<long>(after));
  MemorySet k = progress ? progress_knowledge(p.body, p.env, domain, m, pre, mode)
                         : knowledge(p.body, p.env, domain, m, pre, mode);
  std::vector<std::string> out;
  for (const auto& x : k) out.push_back(memory_to_string(x, p.env));
  return out;
}

py::tuple execute_args(const std::vector<std::string>& args) {
  Outcome o = execute(args);
  return py::make_tuple(o.code, o.json.is_null() ? std::string() : o.json.dump(), o.text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of robustcheck";
  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("check_json", &check_json, py::arg("source"), py::arg("property"), py::arg("mode"), py::arg("domain"),
        py::arg("attack_len"), py::arg("diverge"));
  m.def("typecheck_json", &typecheck_json, py::arg("source"), py::arg("domain"));
  m.def("lower", &lower_source, py::arg("source"), py::arg("domain") = 4);
  m.def("run", &run_trace, py::arg("source"), py::arg("memory"), py::arg("domain") = 4);
  m.def("knowledge", &knowledge_after, py::arg("source"), py::arg("memory"), py::arg("after"), py::arg("mode"),
        py::arg("domain"), py::arg("progress"));
  m.def("execute", &execute_args, py::arg("args"));
  m.attr("__version__") = kToolVersion;
}
