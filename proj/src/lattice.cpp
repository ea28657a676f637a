#include "robustcheck/lattice.hpp"

namespace robustcheck {

std::string to_string(Level l) {
  std::string s = is_public(l) ? "public" : "secret";
  s += is_trusted(l) ? " trusted" : " untrusted";
  return s;
}

std::string short_name(Level l) {
  std::string s = "(";
  s += is_public(l) ? 'P' : 'S';
  s += ',';
  s += is_trusted(l) ? 'T' : 'U';
  s += ')';
  return s;
}

}  // namespace robustcheck
