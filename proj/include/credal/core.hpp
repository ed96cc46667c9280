#pragma once

// Finite possibility spaces, gambles, lower previsions and the decision
// sets they are evaluated on.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "credal/errors.hpp"

namespace credal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerance used when validating probability mass functions.
inline constexpr double kPmfTolerance = 1e-10;

class PossibilitySpace {
 public:
  explicit PossibilitySpace(std::size_t size);
  explicit PossibilitySpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const PossibilitySpace&, const PossibilitySpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// A real payoff per outcome.
class Gamble {
 public:
  Gamble() = default;
  explicit Gamble(Vector payoffs);
  Gamble(std::initializer_list<double> payoffs);

  static Gamble constant(std::size_t size, double value);

  std::size_t size() const { return static_cast<std::size_t>(payoffs_.size()); }
  const Vector& payoffs() const { return payoffs_; }
  double operator[](std::size_t w) const { return payoffs_[static_cast<Eigen::Index>(w)]; }

  double min() const { return payoffs_.minCoeff(); }
  double max() const { return payoffs_.maxCoeff(); }

  Gamble operator+(double c) const { return Gamble(Vector(payoffs_.array() + c)); }
  Gamble operator*(double a) const { return Gamble(Vector(payoffs_ * a)); }

 private:
  Vector payoffs_;
};

/// A probability mass function; entries >= -tol and summing to one.
class Pmf {
 public:
  explicit Pmf(Vector mass);
  Pmf(std::initializer_list<double> mass);

  std::size_t size() const { return static_cast<std::size_t>(mass_.size()); }
  const Vector& mass() const { return mass_; }
  double operator[](std::size_t w) const { return mass_[static_cast<Eigen::Index>(w)]; }

  static Pmf uniform(std::size_t size);

 private:
  Vector mass_;
};

struct PriceAssessment {
  Gamble gamble;
  double price;
};

/// Supremum buying prices for a finite list of gambles.
class LowerPrevision {
 public:
  LowerPrevision(PossibilitySpace space, std::vector<PriceAssessment> entries);

  const PossibilitySpace& space() const { return space_; }
  const std::vector<PriceAssessment>& entries() const { return entries_; }
  std::size_t domain_size() const { return entries_.size(); }

  /// Row i holds g_i(w) - P(g_i); the constraint matrix of every credal LP.
  const Matrix& centered() const { return centered_; }

 private:
  PossibilitySpace space_;
  std::vector<PriceAssessment> entries_;
  Matrix centered_;
};

/// The decision set K. Duplicates are allowed and kept as distinct indices.
class GambleSet {
 public:
  GambleSet(PossibilitySpace space, std::vector<Gamble> members);

  const PossibilitySpace& space() const { return space_; }
  const std::vector<Gamble>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Gamble& operator[](std::size_t i) const { return members_[i]; }

 private:
  PossibilitySpace space_;
  std::vector<Gamble> members_;
};

double expectation(const Pmf& p, const Gamble& f);

Gamble negate(const Gamble& f);

/// Indices of K ordered by non-increasing expectation under p; ties keep
/// their original order.
std::vector<std::size_t> sort_by_expectation(const GambleSet& K, const Pmf& p);

}  // namespace credal
