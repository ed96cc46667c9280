#include "credal/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace credal {

namespace {

Vector to_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ContractViolation(std::string(what) + " has a non-finite entry");
}

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ContractViolation(std::string(what) + ": length " + std::to_string(got) +
                            " does not match possibility space size " + std::to_string(want));
  }
}

}  // namespace

PossibilitySpace::PossibilitySpace(std::size_t size) {
  if (size == 0) throw ContractViolation("possibility space must have at least one outcome");
  labels_.reserve(size);
  for (std::size_t i = 1; i <= size; ++i) labels_.push_back("w" + std::to_string(i));
}

PossibilitySpace::PossibilitySpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ContractViolation("possibility space must have at least one outcome");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw ContractViolation("outcome labels must be unique");
}

Gamble::Gamble(Vector payoffs) : payoffs_(std::move(payoffs)) {
  if (payoffs_.size() == 0) throw ContractViolation("gamble must have at least one payoff");
  require_finite(payoffs_, "gamble");
}

Gamble::Gamble(std::initializer_list<double> payoffs) : Gamble(to_vector(payoffs)) {}

Gamble Gamble::constant(std::size_t size, double value) {
  return Gamble(Vector::Constant(static_cast<Eigen::Index>(size), value));
}

Pmf::Pmf(Vector mass) : mass_(std::move(mass)) {
  if (mass_.size() == 0) throw ContractViolation("pmf must have at least one entry");
  require_finite(mass_, "pmf");
  if (mass_.minCoeff() < -kPmfTolerance) throw ContractViolation("pmf has a negative mass");
  if (std::abs(mass_.sum() - 1.0) > kPmfTolerance) {
    throw ContractViolation("pmf masses sum to " + std::to_string(mass_.sum()));
  }
}

Pmf::Pmf(std::initializer_list<double> mass) : Pmf(to_vector(mass)) {}

Pmf Pmf::uniform(std::size_t size) {
  const auto n = static_cast<Eigen::Index>(size);
  return Pmf(Vector::Constant(n, 1.0 / static_cast<double>(size)));
}

LowerPrevision::LowerPrevision(PossibilitySpace space, std::vector<PriceAssessment> entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  if (entries_.empty()) throw ContractViolation("lower prevision needs at least one assessment");
  const auto n = space_.size();
  centered_.resize(static_cast<Eigen::Index>(entries_.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& [g, price] = entries_[i];
    require_size(g.size(), n, "domain gamble");
    if (!std::isfinite(price)) throw ContractViolation("lower prevision price is not finite");
    centered_.row(static_cast<Eigen::Index>(i)) = (g.payoffs().array() - price).matrix().transpose();
  }
}

GambleSet::GambleSet(PossibilitySpace space, std::vector<Gamble> members)
    : space_(std::move(space)), members_(std::move(members)) {
  if (members_.empty()) throw ContractViolation("gamble set must not be empty");
  for (const auto& f : members_) require_size(f.size(), space_.size(), "gamble set member");
}

double expectation(const Pmf& p, const Gamble& f) {
  if (p.size() != f.size()) {
    throw ContractViolation("expectation: pmf has " + std::to_string(p.size()) +
                            " entries but gamble has " + std::to_string(f.size()));
  }
  return p.mass().dot(f.payoffs());
}

Gamble negate(const Gamble& f) { return Gamble(Vector(-f.payoffs())); }

std::vector<std::size_t> sort_by_expectation(const GambleSet& K, const Pmf& p) {
  std::vector<double> value(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) value[i] = expectation(p, K[i]);
  std::vector<std::size_t> order(K.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
  return order;
}

}  // namespace credal
