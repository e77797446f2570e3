#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csp {

/// Precondition on a mathematical quantity violated (empty set, zero volume,
/// probability out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input file. `line()` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The iterative eigensolver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual, std::size_t iterations)
      : std::runtime_error(what), best_residual_(best_residual), iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  std::size_t iterations_;
};

/// Seeding activated no node; callers may retry with another seed.
class NoSeedsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csp
