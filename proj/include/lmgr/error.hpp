#pragma once

#include <stdexcept>
#include <string>

namespace lmgr {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (PDDL, bundle data files). Carries a 1-based position
// when one is known; line 0 means "no position".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)
                       : what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that uses a feature outside the STRIPS+typing subset.
class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

// Well-formed input that references something undeclared, has an arity
// mismatch, or is otherwise inconsistent.
class SemanticError : public Error {
 public:
  using Error::Error;
};

// Bundle directory problems: missing files, unresolvable observations, a true
// hypothesis that is not among the candidates.
class BundleError : public Error {
 public:
  using Error::Error;
};

// A configurable size/step cap was exceeded. The CLI maps this to exit code 2.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Search proved that no plan exists.
class UnsolvableError : public Error {
 public:
  using Error::Error;
};

}  // namespace lmgr
