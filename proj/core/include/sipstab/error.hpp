#pragma once

#include <stdexcept>
#include <string>

namespace sipstab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree with the function or system.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: a non-PSD quadratic, an empty grid, a bad scenario
/// file. `line()` is the 1-based source line when the input came from a file,
/// or 0 when unknown. what() reads "source:line: message".
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, int line = 0, const std::string& source = {})
      : Error(compose(message, line, source)), message_(message), line_(line) {}

  int line() const noexcept { return line_; }
  /// The message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string compose(const std::string& message, int line, const std::string& source) {
    std::string where = source;
    if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? message : where + ": " + message;
  }

  std::string message_;
  int line_;
};

/// A hypothesis required by a formula does not hold (e.g. the strong Slater
/// condition for the dual distance formula).
class PrerequisiteError : public Error {
 public:
  using Error::Error;
};

/// A reference point is not feasible, or a feasible set is empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace sipstab
