#pragma once

#include <stdexcept>
#include <string>

namespace ame {

/// Precondition or domain violation (bad field, mismatched operands, k != 0 where required, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation would exceed a configured budget (dense size, commutation tests).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a structural invariant, e.g. parameters beyond the quantum Singleton bound.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed input text. Carries the source name and 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }

 private:
  std::string source_;
  int line_;
};

}  // namespace ame
