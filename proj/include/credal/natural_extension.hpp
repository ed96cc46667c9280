#pragma once

// Lower and upper natural extensions as linear programs.
//
// For a lower prevision with centered matrix G (row i = g_i - P(g_i)):
//
//   lower, credal side:      min f'p     s.t.  G p >= 0, 1'p = 1, p >= 0
//   lower, multiplier side:  max alpha   s.t.  alpha + G'lambda <= f, lambda >= 0
//   upper, multiplier side:  min beta    s.t.  beta - G'lambda >= f, lambda >= 0
//   upper, credal side:      max f'p     s.t.  G p >= 0, 1'p = 1, p >= 0
//
// Each pair is a primal/dual couple with a common optimum. Only one member of
// a pair is handed to the interior-point solver; its dual iterate carries the
// other one, so both bounds come out of every iteration.

#include <limits>
#include <memory>
#include <optional>

#include "credal/core.hpp"
#include "credal/linprog.hpp"

namespace credal {

enum class Bound { Lower, Upper };

/// Which member of the LP pair is solved as the standard-form primal.
enum class Orientation {
  Auto,        // the side with fewer constraint rows
  Credal,      // rows: one per domain gamble plus normalization
  Multiplier,  // rows: one per outcome
};

struct NatexProblem {
  Bound sense = Bound::Lower;
  Gamble gamble;
  lp::LinearProgram primal_program;  // minimizing member of the pair
  lp::LinearProgram dual_program;    // maximizing member
  Orientation orientation = Orientation::Credal;  // never Auto once built
  lp::StandardFormLP lp;             // the member that is solved
  /// +1 when c'x of `lp` bounds the natural extension from above, -1 when
  /// -c'x bounds it from below.
  double sign = 1.0;
};

Orientation resolve_orientation(const LowerPrevision& P, Orientation requested);

NatexProblem build_lower(const LowerPrevision& P, const Gamble& f, Orientation orientation = Orientation::Auto);
NatexProblem build_upper(const LowerPrevision& P, const Gamble& f, Orientation orientation = Orientation::Auto);

/// A strictly interior point of the credal set.
struct CredalStart {
  Pmf point;
  double margin;   // min over i of E_p(g_i) - P(g_i), and of |Omega| * p(w)
  int iterations;  // interior-point iterations spent finding it
};

inline constexpr double kAslTolerance = 1e-9;

/// Maximizes delta subject to E_p(g_i) - P(g_i) >= delta and
/// p(w) >= delta / |Omega|. Throws NotAvoidingSureLoss when the optimum is
/// below -1e-9 and DegenerateAsl when it is within 1e-9 of zero.
/// Assessments with g_i - P(g_i) identically zero constrain nothing and are
/// skipped.
CredalStart interior_credal_point(const LowerPrevision& P, const lp::SolverOptions& options = {});

/// Values of the multiplier-side variables: alpha (lower) or beta (upper)
/// and one lambda per domain gamble.
struct MultiplierPoint {
  double offset;
  Vector lambda;
};

inline constexpr double kDirectStartWeight = 1e-2;

/// A point satisfying every multiplier-side constraint with slack >= 1.
MultiplierPoint direct_dual_start(const LowerPrevision& P, const Gamble& f, Bound sense,
                                  double weight = kDirectStartWeight);

/// Interior-point run on one natural-extension LP that can be advanced one
/// iteration at a time. Bounds are reported in natural-extension terms.
class NatexSession {
 public:
  NatexSession(lp::StandardFormLP lp, double sign, const std::optional<lp::WarmStart>& warm,
               const lp::SolverOptions& options);

  /// One iteration; does nothing once converged. Throws lp::SolverFailure on
  /// numerical breakdown or when the iteration cap is hit.
  void step();

  bool converged() const { return converged_; }
  int iterations() const { return state_.iteration; }
  bool certified() const;
  double gap() const { return state_.primal_value - state_.dual_value; }

  /// Certified lower/upper bounds; -inf/+inf while uncertified.
  double lower() const;
  double upper() const;
  /// The same bounds without the certification check.
  double raw_lower() const { return sign_ > 0 ? state_.dual_value : -state_.primal_value; }
  double raw_upper() const { return sign_ > 0 ? state_.primal_value : -state_.dual_value; }
  /// Midpoint of the bounds, available once converged.
  std::optional<double> value() const;

  const lp::IterateState& state() const { return state_; }
  const lp::StandardFormLP& program() const { return lp_; }

 private:
  lp::StandardFormLP lp_;
  double sign_;
  lp::SolverOptions options_;
  lp::IterateState state_;
  bool converged_ = false;
};

/// Natural-extension LPs of one lower prevision. The constraint matrices are
/// built once and shared by every gamble; const members are safe to call
/// from several threads. Assessments with g_i - P(g_i) identically zero are
/// left out of the programs.
class NatexEngine {
 public:
  explicit NatexEngine(LowerPrevision P, const lp::SolverOptions& options = {},
                       Orientation orientation = Orientation::Auto);

  const LowerPrevision& prevision() const { return P_; }
  const lp::SolverOptions& options() const { return options_; }
  Orientation orientation() const { return orientation_; }

  /// Runs the phase-one LP (once) so warm sessions become available.
  const CredalStart& prepare_warm_starts();
  const std::optional<CredalStart>& credal_start() const { return start_; }

  lp::StandardFormLP program(const Gamble& f, Bound sense) const;
  double sign(Bound sense) const;

  NatexSession cold_session(const Gamble& f, Bound sense) const;
  /// Requires prepare_warm_starts().
  NatexSession warm_session(const Gamble& f, Bound sense) const;
  lp::WarmStart warm_start(const Gamble& f, Bound sense) const;

  /// Full warm solves.
  double lower(const Gamble& f) const;
  double upper(const Gamble& f) const;

 private:
  LowerPrevision P_;
  Matrix G_;  // centered rows that are not identically zero
  lp::SolverOptions options_;
  Orientation orientation_;
  lp::StandardFormLP lower_template_;
  lp::StandardFormLP upper_template_;
  std::optional<CredalStart> start_;
};

/// One-shot natural extensions with both warm starts; the prevision must
/// avoid sure loss.
double lower_natex(const LowerPrevision& P, const Gamble& f, const lp::SolverOptions& options = {});
double upper_natex(const LowerPrevision& P, const Gamble& f, const lp::SolverOptions& options = {});

}  // namespace credal
