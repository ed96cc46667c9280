#pragma once

// Dense standard-form linear programs
//
//     minimize c'x  subject to  Ax = b,  x_j >= 0 for every non-free column j
//
// and an infeasible-start Mehrotra predictor-corrector method that can be
// driven one iteration at a time, so callers can inspect the primal and dual
// objective bounds between iterations.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "credal/core.hpp"

namespace credal::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };
enum class VarKind { NonNegative, Free };

/// How free source variables are represented in standard form.
enum class FreeVariables {
  Split,   // v = v⁺ - v⁻ with v⁺, v⁻ >= 0
  Native,  // one column without a sign constraint
};

/// An LP in the form it is usually written down.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  Vector objective;               // one entry per source variable
  std::vector<VarKind> kinds;     // one entry per source variable
  Matrix rows;                    // constraints x variables
  std::vector<Relation> relations;
  Vector rhs;

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_constraints() const { return rows.rows(); }
};

struct StandardFormLP {
  Vector c;
  std::shared_ptr<const Matrix> A;
  Vector b;
  std::vector<bool> free;  // columns without a sign constraint

  // Mapping back to the source program.
  double objective_sign = 1.0;              // source objective = objective_sign * c'x
  std::vector<Eigen::Index> plus_column;    // per source variable
  std::vector<Eigen::Index> minus_column;   // per source variable, -1 unless split
  std::vector<Eigen::Index> slack_column;   // per source row, -1 for equalities
  std::vector<double> slack_sign;           // +1 for <=, -1 for >=
  std::vector<Eigen::Index> kept_rows;      // source row of every standard row

  Eigen::Index rows() const { return A->rows(); }
  Eigen::Index cols() const { return A->cols(); }
  Eigen::Index num_free() const;

  /// Source variable values of a standard-form point.
  Vector source_values(const Vector& x) const;
  /// Standard-form point (slacks included) of a source assignment.
  Vector standard_point(const Vector& source) const;

  /// Replace the objective / right-hand side given in source terms. The
  /// constraint matrix (and the rows dropped as redundant) is unchanged.
  void set_source_objective(const Vector& objective);
  void set_source_rhs(const Vector& rhs);
};

/// Converts a source program. Inequalities get one slack column each; free
/// variables are split or kept per `mode`; linearly dependent equality rows
/// are dropped (rank threshold 1e-12).
StandardFormLP to_standard_form(const LinearProgram& program,
                                FreeVariables mode = FreeVariables::Split);

struct IterateState {
  Vector x;  // primal, strictly positive on non-free columns
  Vector y;  // dual, free
  Vector s;  // dual slack, strictly positive on non-free columns, zero on free ones
  double r_primal = 0.0;  // ||Ax - b||_inf
  double r_dual = 0.0;    // ||A'y + s - c||_inf
  double mu = 0.0;        // x's / (number of non-free columns)
  double primal_value = 0.0;  // c'x
  double dual_value = 0.0;    // b'y
  int iteration = 0;
};

struct BoundsPair {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = false;

  double gap() const { return upper - lower; }
};

inline constexpr double kFeasibilityTolerance = 1e-8;
inline constexpr double kInteriorFloor = 1e-2;

struct SolverOptions {
  double epsilon = 1e-8;
  double feasibility_tolerance = kFeasibilityTolerance;
  int max_iterations = 500;
  double step_fraction = 0.9995;
  double regularization = 1e-10;
  double interior_floor = kInteriorFloor;
  double divergence_limit = 1e10;
};

/// Starting values in source terms. `dual` holds one multiplier per source
/// row in the convention of the standard-form dual (A'y + s = c).
struct WarmStart {
  std::optional<Vector> primal;
  std::optional<Vector> dual;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, IterateState state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const IterateState& state() const { return state_; }

 private:
  IterateState state_;
};

/// Residuals, objective values and mu of (x, y, s).
void refresh(const StandardFormLP& lp, IterateState& state);

IterateState pd_init(const StandardFormLP& lp, const std::optional<WarmStart>& warm = std::nullopt,
                     const SolverOptions& options = {});

/// One predictor-corrector iteration. Throws SolverFailure when the normal
/// equations cannot be factored.
IterateState pd_step(const StandardFormLP& lp, const IterateState& state,
                     const SolverOptions& options = {});

/// lower = b'y, upper = c'x; certified when both residuals are below the
/// feasibility tolerance.
BoundsPair bounds(const IterateState& state, double feasibility_tolerance = kFeasibilityTolerance);

enum class SolveStatus { Converged, EarlyStopped, IterationLimit, Unbounded, Infeasible };

std::string to_string(SolveStatus status);

using StopPredicate = std::function<bool(const BoundsPair&)>;

struct SolveResult {
  SolveStatus status = SolveStatus::IterationLimit;
  std::optional<double> value;  // set when converged
  IterateState state;
  int iterations = 0;  // steps taken by this call
};

/// Steps until max{gap, r_P, r_D} < epsilon, or until `stop` accepts a
/// certified bounds pair.
SolveResult solve_to_tolerance(const StandardFormLP& lp, IterateState start,
                               const SolverOptions& options = {}, const StopPredicate& stop = {});
SolveResult solve_to_tolerance(const StandardFormLP& lp, const SolverOptions& options = {},
                               const StopPredicate& stop = {});

}  // namespace credal::lp
