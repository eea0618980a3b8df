#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace replan {

// Operand shapes disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite input to a learner step.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed text input; carries the 1-based line number (0 when unknown) and,
// optionally, the file it came from.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& detail, std::size_t line, const std::string& source = {})
      : std::runtime_error(compose(detail, line, source)), line_(line), detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string compose(const std::string& detail, std::size_t line,
                             const std::string& source) {
    if (!source.empty()) {
      return source + (line == 0 ? "" : ":" + std::to_string(line)) + ": " + detail;
    }
    return line == 0 ? detail : "line " + std::to_string(line) + ": " + detail;
  }

  std::size_t line_;
  std::string detail_;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace replan
