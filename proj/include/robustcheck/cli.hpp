#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "robustcheck/report.hpp"

namespace robustcheck {

// Result of one subcommand invocation.
struct Outcome {
  int code = 0;  // 0 accept/pass, 1 reject/fail, 2 usage or input error
  Json json;
  std::string text;
};

// args excludes the program name, e.g. {"check", "f.ifc", "--mode", "pi"}.
Outcome execute(const std::vector<std::string>& args);

// Prints the text or JSON form of execute() and returns its exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// `// expect: <subcommand options> => <result>` lines of a corpus file.
// result: accept | reject [RULE] | error
struct Expectation {
  int line = 0;
  std::vector<std::string> args;  // subcommand and its options, without the file
  std::string status;
  std::string rule;
};

std::vector<Expectation> parse_expectations(const std::string& text);

}  // namespace robustcheck
