#pragma once

#include <stdexcept>
#include <string>

namespace robustcheck {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Undeclared variable, duplicate declaration, or reserved name.
class EnvError : public Error {
 public:
  using Error::Error;
};

// Duplicate endorsement label.
class LabelError : public Error {
 public:
  using Error::Error;
};

class ReservedVarError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConstruct : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class ScaleError : public Error {
 public:
  using Error::Error;
};

}  // namespace robustcheck
