#pragma once

#include <stdexcept>
#include <string>

namespace sdpal {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible matrix/vector dimensions.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Eigensolver or linear-solve breakdown.
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Constraint operator is rank deficient (AA^T not positive definite).
struct RankError : Error {
  explicit RankError(const std::string& msg) : Error(msg) {}
};

// Matrix expected to be positive semidefinite is not.
struct NotPsdError : Error {
  explicit NotPsdError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; carries a 1-based line number when known.
struct ParseError : Error {
  ParseError(const std::string& msg, int line)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_number(line) {}
  int line_number;
};

}  // namespace sdpal
