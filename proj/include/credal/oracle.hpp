#pragma once

// Reference values computed independently of the interior-point solver:
// a dense tableau simplex with Bland's rule, and the three optimal sets
// evaluated straight from their definitions.

#include <cstddef>
#include <vector>

#include <string>

#include "credal/core.hpp"
#include "credal/criteria.hpp"
#include "credal/natural_extension.hpp"

namespace credal::oracle {

enum class SimplexStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::Infeasible;
  double value = 0.0;
  Vector x;
};

/// min c'x s.t. Ax = b, x >= 0, by the two-phase method.
SimplexResult simplex_minimize(const Matrix& A, const Vector& b, const Vector& c, double pivot_tol = 1e-9);

/// Natural extension over the credal set. Throws NotAvoidingSureLoss when
/// the credal set is empty.
double oracle_natex(const LowerPrevision& P, const Gamble& f, Bound sense);

inline constexpr double kOracleTolerance = 1e-6;

struct OracleSets {
  std::vector<std::size_t> maximin;
  std::vector<std::size_t> maximax;
  std::vector<std::size_t> interval_dominant;
  std::vector<double> e_values;
  std::vector<double> ebar_values;
  double max_lower = 0.0;  // max_j E(f_j)
  double max_upper = 0.0;  // max_j Ebar(f_j)
  // Distance of the nearest excluded value to each threshold (infinite when
  // nothing is excluded). For interval dominance: the smallest |Ebar - max E|
  // over gambles outside the maximin set.
  double maximin_margin = 0.0;
  double maximax_margin = 0.0;
  double id_margin = 0.0;
};

/// Index sets are 0-based and sorted.
OracleSets oracle_opt_sets(const LowerPrevision& P, const GambleSet& K, double tol = kOracleTolerance);

/// Checks a chosen index set against oracle values. Maximin and maximax
/// answers must attain the optimum within `tol`. An interval-dominance
/// answer must equal the oracle set when sets.id_margin exceeds
/// `margin_floor`; below that only the maximin and maximax sets must be
/// contained and every member must pass the threshold within `tol`.
/// Returns an empty string on success, otherwise the first disagreement.
std::string check_chosen(CriterionKind kind, const std::vector<std::size_t>& chosen, const OracleSets& sets,
                         double tol = kOracleTolerance, double margin_floor = 1e-5);

}  // namespace credal::oracle
