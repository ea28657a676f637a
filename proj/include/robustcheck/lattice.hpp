#pragma once

#include <cstdint>
#include <string>

namespace robustcheck {

enum class Conf : std::uint8_t { Public, Secret };
enum class Integ : std::uint8_t { Trusted, Untrusted };

// Point of the confidentiality x integrity lattice.
struct Level {
  Conf conf = Conf::Public;
  Integ integ = Integ::Trusted;

  friend constexpr bool operator==(Level, Level) = default;
};

inline constexpr Level kBottom{Conf::Public, Integ::Trusted};
inline constexpr Level kTop{Conf::Secret, Integ::Untrusted};
inline constexpr Level kPublicTrusted{Conf::Public, Integ::Trusted};
inline constexpr Level kPublicUntrusted{Conf::Public, Integ::Untrusted};
inline constexpr Level kSecretTrusted{Conf::Secret, Integ::Trusted};
inline constexpr Level kSecretUntrusted{Conf::Secret, Integ::Untrusted};

constexpr bool leq(Level a, Level b) {
  return static_cast<int>(a.conf) <= static_cast<int>(b.conf) &&
         static_cast<int>(a.integ) <= static_cast<int>(b.integ);
}

constexpr Level join(Level a, Level b) {
  return {a.conf == Conf::Secret || b.conf == Conf::Secret ? Conf::Secret : Conf::Public,
          a.integ == Integ::Untrusted || b.integ == Integ::Untrusted ? Integ::Untrusted
                                                                      : Integ::Trusted};
}

constexpr Level meet(Level a, Level b) {
  return {a.conf == Conf::Secret && b.conf == Conf::Secret ? Conf::Secret : Conf::Public,
          a.integ == Integ::Untrusted && b.integ == Integ::Untrusted ? Integ::Untrusted
                                                                      : Integ::Trusted};
}

struct LatticeOps {
  Level join;
  Level meet;
  bool leq;
};

constexpr LatticeOps lattice_ops(Level a, Level b) {
  return {robustcheck::join(a, b), robustcheck::meet(a, b), robustcheck::leq(a, b)};
}

constexpr bool is_public(Level l) { return l.conf == Conf::Public; }
constexpr bool is_trusted(Level l) { return l.integ == Integ::Trusted; }

// "public trusted", as written in declarations.
std::string to_string(Level l);
// "(P,T)"
std::string short_name(Level l);

}  // namespace robustcheck
