#pragma once

#include <string>
#include <string_view>

#include "robustcheck/ast.hpp"

namespace robustcheck {

struct ParseOptions {
  // Accept declarations of `__chk_` temporaries (re-reading lowered output).
  bool allow_reserved_temporaries = false;
  int domain_size = 4;
};

// Surface grammar:
//   var NAME : (public|secret) (trusted|untrusted);   header declarations
//   [#]                       hole
//   x := e | x := endorse@L(e)
//   endorse@L(x, ...) if e then S else S             checked endorsement
//   if e then S [else S] | if e { ... } [else { ... }]
//   while e do S | while e { ... }
// Statements are separated by ';'. Comments run from // to end of line.
// Throws ParseError, EnvError or LabelError.
Program parse_program(std::string_view text, const ParseOptions& opts = {});

}  // namespace robustcheck
