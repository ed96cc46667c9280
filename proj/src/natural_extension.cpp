#include "credal/natural_extension.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace credal {

namespace {

using Index = Eigen::Index;
using lp::LinearProgram;
using lp::Relation;
using lp::VarKind;

// Rows of g_i - P(g_i) that are not identically zero. The others hold for
// every pmf, and their slack is zero at every feasible point, so keeping them
// would leave the programs without a strictly feasible start.
Matrix active_rows(const Matrix& centered) {
  std::vector<Index> keep;
  for (Index i = 0; i < centered.rows(); ++i) {
    if (centered.row(i).cwiseAbs().maxCoeff() > 0.0) keep.push_back(i);
  }
  Matrix G(static_cast<Index>(keep.size()), centered.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) G.row(static_cast<Index>(r)) = centered.row(keep[r]);
  return G;
}

LinearProgram credal_program(const Matrix& G, const Vector& f, Bound sense) {
  const Index m = G.rows();
  const Index n = G.cols();
  LinearProgram prog;
  prog.sense = sense == Bound::Lower ? lp::Sense::Minimize : lp::Sense::Maximize;
  prog.objective = f;
  prog.kinds.assign(static_cast<std::size_t>(n), VarKind::NonNegative);
  prog.rows.resize(m + 1, n);
  prog.rows.topRows(m) = G;
  prog.rows.row(m).setOnes();
  prog.relations.assign(static_cast<std::size_t>(m), Relation::GreaterEqual);
  prog.relations.push_back(Relation::Equal);
  prog.rhs = Vector::Zero(m + 1);
  prog.rhs[m] = 1.0;
  return prog;
}

// Variable 0 is alpha (lower) or beta (upper), then one lambda per domain gamble.
LinearProgram multiplier_program(const Matrix& G, const Vector& f, Bound sense) {
  const Index m = G.rows();
  const Index n = G.cols();
  const bool lower = sense == Bound::Lower;
  LinearProgram prog;
  prog.sense = lower ? lp::Sense::Maximize : lp::Sense::Minimize;
  prog.objective = Vector::Zero(m + 1);
  prog.objective[0] = 1.0;
  prog.kinds.assign(static_cast<std::size_t>(m + 1), VarKind::NonNegative);
  prog.kinds[0] = VarKind::Free;
  prog.rows.resize(n, m + 1);
  prog.rows.col(0).setOnes();
  prog.rows.rightCols(m) = lower ? Matrix(G.transpose()) : Matrix(-G.transpose());
  prog.relations.assign(static_cast<std::size_t>(n), lower ? Relation::LessEqual : Relation::GreaterEqual);
  prog.rhs = f;
  return prog;
}

double orientation_sign(Bound sense, Orientation orientation) {
  const bool credal = orientation == Orientation::Credal;
  return (sense == Bound::Lower) == credal ? 1.0 : -1.0;
}

NatexProblem build(const LowerPrevision& P, const Gamble& f, Bound sense, Orientation requested) {
  if (f.size() != P.space().size()) {
    throw ContractViolation("gamble has " + std::to_string(f.size()) + " payoffs, possibility space has " +
                            std::to_string(P.space().size()));
  }
  NatexProblem prob;
  prob.sense = sense;
  prob.gamble = f;
  LinearProgram credal = credal_program(P.centered(), f.payoffs(), sense);
  LinearProgram multiplier = multiplier_program(P.centered(), f.payoffs(), sense);
  prob.orientation = resolve_orientation(P, requested);
  prob.lp = lp::to_standard_form(prob.orientation == Orientation::Credal ? credal : multiplier,
                                 lp::FreeVariables::Native);
  prob.sign = orientation_sign(sense, prob.orientation);
  if (sense == Bound::Lower) {
    prob.primal_program = std::move(credal);
    prob.dual_program = std::move(multiplier);
  } else {
    prob.primal_program = std::move(multiplier);
    prob.dual_program = std::move(credal);
  }
  return prob;
}

}  // namespace

Orientation resolve_orientation(const LowerPrevision& P, Orientation requested) {
  if (requested != Orientation::Auto) return requested;
  return P.space().size() <= P.domain_size() + 1 ? Orientation::Multiplier : Orientation::Credal;
}

NatexProblem build_lower(const LowerPrevision& P, const Gamble& f, Orientation orientation) {
  return build(P, f, Bound::Lower, orientation);
}

NatexProblem build_upper(const LowerPrevision& P, const Gamble& f, Orientation orientation) {
  return build(P, f, Bound::Upper, orientation);
}

CredalStart interior_credal_point(const LowerPrevision& P, const lp::SolverOptions& options) {
  // Solved through its dual:
  //   min z  s.t.  G'mu + nu - z 1 + w = 0,  1'mu + 1'nu / N = 1,
  //                mu, nu, w >= 0, z free.
  // The multipliers of the first N rows are -p, the last one is delta.
  const Matrix G = active_rows(P.centered());
  const Index m = G.rows();
  const Index n = G.cols();
  const Index vars = m + 2 * n + 1;

  LinearProgram prog;
  prog.objective = Vector::Zero(vars);
  prog.objective[vars - 1] = 1.0;
  prog.kinds.assign(static_cast<std::size_t>(vars), VarKind::NonNegative);
  prog.kinds.back() = VarKind::Free;
  prog.rows = Matrix::Zero(n + 1, vars);
  prog.rows.block(0, 0, n, m) = G.transpose();
  prog.rows.block(0, m, n, n).setIdentity();
  prog.rows.block(0, m + n, n, n).setIdentity();
  prog.rows.block(0, vars - 1, n, 1).setConstant(-1.0);
  prog.rows.block(n, 0, 1, m).setOnes();
  prog.rows.block(n, m, 1, n).setConstant(1.0 / static_cast<double>(n));
  prog.relations.assign(static_cast<std::size_t>(n + 1), Relation::Equal);
  prog.rhs = Vector::Zero(n + 1);
  prog.rhs[n] = 1.0;

  const lp::StandardFormLP sf = lp::to_standard_form(prog, lp::FreeVariables::Native);
  const lp::SolveResult res = lp::solve_to_tolerance(sf, options);
  if (res.status != lp::SolveStatus::Converged) {
    throw lp::SolverFailure("phase-one LP ended with status " + lp::to_string(res.status), res.state);
  }
  const double delta = *res.value;
  if (delta < -kAslTolerance) throw NotAvoidingSureLoss(delta);
  if (delta <= kAslTolerance) throw DegenerateAsl(delta);

  Vector y = Vector::Zero(n + 1);
  for (std::size_t r = 0; r < sf.kept_rows.size(); ++r) y[sf.kept_rows[r]] = res.state.y[static_cast<Index>(r)];
  Vector p = (-y.head(n)).cwiseMax(0.0);
  p /= p.sum();
  double margin = static_cast<double>(n) * p.minCoeff();
  if (G.rows() > 0) margin = std::min(margin, (G * p).minCoeff());
  if (!(margin > 0.0)) throw DegenerateAsl(margin);
  return CredalStart{Pmf(std::move(p)), margin, res.iterations};
}

namespace {

MultiplierPoint dual_start(const Matrix& G, const Gamble& f, Bound sense, double weight) {
  const Vector column_sums = G.colwise().sum().transpose();
  MultiplierPoint pt;
  pt.lambda = Vector::Constant(G.rows(), weight);
  if (sense == Bound::Lower) {
    pt.offset = (f.payoffs() - weight * column_sums).minCoeff() - 1.0;
  } else {
    pt.offset = (f.payoffs() + weight * column_sums).maxCoeff() + 1.0;
  }
  return pt;
}

}  // namespace

MultiplierPoint direct_dual_start(const LowerPrevision& P, const Gamble& f, Bound sense, double weight) {
  if (f.size() != P.space().size()) throw ContractViolation("gamble does not match the possibility space");
  return dual_start(P.centered(), f, sense, weight);
}

NatexSession::NatexSession(lp::StandardFormLP lp, double sign, const std::optional<lp::WarmStart>& warm,
                           const lp::SolverOptions& options)
    : lp_(std::move(lp)), sign_(sign), options_(options), state_(lp::pd_init(lp_, warm, options_)) {}

void NatexSession::step() {
  if (converged_) return;
  if (state_.iteration >= options_.max_iterations) {
    throw lp::SolverFailure("iteration limit reached before convergence", state_);
  }
  state_ = lp::pd_step(lp_, state_, options_);
  if (std::max({gap(), state_.r_primal, state_.r_dual}) < options_.epsilon) {
    converged_ = true;
    return;
  }
  const double size = std::max({state_.x.lpNorm<Eigen::Infinity>(), state_.y.lpNorm<Eigen::Infinity>(),
                                state_.s.lpNorm<Eigen::Infinity>()});
  if (size > options_.divergence_limit) throw lp::SolverFailure("iterates diverged", state_);
}

bool NatexSession::certified() const {
  return state_.r_primal < options_.feasibility_tolerance && state_.r_dual < options_.feasibility_tolerance;
}

double NatexSession::lower() const {
  return certified() ? raw_lower() : -std::numeric_limits<double>::infinity();
}

double NatexSession::upper() const {
  return certified() ? raw_upper() : std::numeric_limits<double>::infinity();
}

std::optional<double> NatexSession::value() const {
  if (!converged_) return std::nullopt;
  return sign_ * 0.5 * (state_.primal_value + state_.dual_value);
}

NatexEngine::NatexEngine(LowerPrevision P, const lp::SolverOptions& options, Orientation orientation)
    : P_(std::move(P)),
      G_(active_rows(P_.centered())),
      options_(options),
      orientation_(resolve_orientation(P_, orientation)) {
  const Vector zero = Vector::Zero(static_cast<Index>(P_.space().size()));
  const bool credal = orientation_ == Orientation::Credal;
  for (Bound sense : {Bound::Lower, Bound::Upper}) {
    LinearProgram prog = credal ? credal_program(G_, zero, sense) : multiplier_program(G_, zero, sense);
    (sense == Bound::Lower ? lower_template_ : upper_template_) =
        lp::to_standard_form(prog, lp::FreeVariables::Native);
  }
}

const CredalStart& NatexEngine::prepare_warm_starts() {
  if (!start_) start_ = interior_credal_point(P_, options_);
  return *start_;
}

double NatexEngine::sign(Bound sense) const { return orientation_sign(sense, orientation_); }

lp::StandardFormLP NatexEngine::program(const Gamble& f, Bound sense) const {
  if (f.size() != P_.space().size()) throw ContractViolation("gamble does not match the possibility space");
  lp::StandardFormLP prog = sense == Bound::Lower ? lower_template_ : upper_template_;
  if (orientation_ == Orientation::Credal) {
    prog.set_source_objective(f.payoffs());
  } else {
    prog.set_source_rhs(f.payoffs());
  }
  return prog;
}

lp::WarmStart NatexEngine::warm_start(const Gamble& f, Bound sense) const {
  if (!start_) throw ContractViolation("warm starts requested before prepare_warm_starts()");
  if (f.size() != P_.space().size()) throw ContractViolation("gamble does not match the possibility space");
  const Vector& p = start_->point.mass();
  const MultiplierPoint mp = dual_start(G_, f, sense, kDirectStartWeight);
  const Index m = mp.lambda.size();
  lp::WarmStart ws;
  if (orientation_ == Orientation::Credal) {
    ws.primal = p;
    Vector y(m + 1);
    y.head(m) = mp.lambda;
    y[m] = sense == Bound::Lower ? mp.offset : -mp.offset;
    ws.dual = std::move(y);
  } else {
    Vector v(m + 1);
    v[0] = mp.offset;
    v.tail(m) = mp.lambda;
    ws.primal = std::move(v);
    ws.dual = sense == Bound::Lower ? Vector(-p) : p;
  }
  return ws;
}

NatexSession NatexEngine::cold_session(const Gamble& f, Bound sense) const {
  return NatexSession(program(f, sense), sign(sense), std::nullopt, options_);
}

NatexSession NatexEngine::warm_session(const Gamble& f, Bound sense) const {
  return NatexSession(program(f, sense), sign(sense), warm_start(f, sense), options_);
}

double NatexEngine::lower(const Gamble& f) const {
  NatexSession s = warm_session(f, Bound::Lower);
  while (!s.converged()) s.step();
  return *s.value();
}

double NatexEngine::upper(const Gamble& f) const {
  NatexSession s = warm_session(f, Bound::Upper);
  while (!s.converged()) s.step();
  return *s.value();
}

double lower_natex(const LowerPrevision& P, const Gamble& f, const lp::SolverOptions& options) {
  NatexEngine engine(P, options);
  engine.prepare_warm_starts();
  return engine.lower(f);
}

double upper_natex(const LowerPrevision& P, const Gamble& f, const lp::SolverOptions& options) {
  NatexEngine engine(P, options);
  engine.prepare_warm_starts();
  return engine.upper(f);
}

}  // namespace credal
