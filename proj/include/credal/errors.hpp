#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace credal {

/// Raised when a caller breaks a documented precondition (dimension
/// mismatch, non-finite payoff, empty set, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the instance reader. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The lower prevision incurs sure loss (its credal set is empty).
class NotAvoidingSureLoss : public std::runtime_error {
 public:
  explicit NotAvoidingSureLoss(double margin)
      : std::runtime_error("lower prevision does not avoid sure loss (margin " +
                           std::to_string(margin) + ")"),
        margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

/// The credal set is non-empty but has no strictly interior point.
class DegenerateAsl : public std::runtime_error {
 public:
  explicit DegenerateAsl(double margin)
      : std::runtime_error("credal set has empty interior (margin " +
                           std::to_string(margin) + ")"),
        margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace credal
