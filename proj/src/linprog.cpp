#include "credal/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace credal::lp {

namespace {

using Index = Eigen::Index;

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

// Rows owning a column that is zero in every other row ("private" columns).
// Such rows are independent of all others, so only the remaining rows need a
// rank check.
std::vector<bool> rows_with_private_columns(const Matrix& A) {
  std::vector<bool> owned(static_cast<std::size_t>(A.rows()), false);
  for (Index j = 0; j < A.cols(); ++j) {
    Index owner = -1;
    int nonzeros = 0;
    for (Index i = 0; i < A.rows() && nonzeros < 2; ++i) {
      if (A(i, j) != 0.0) {
        owner = i;
        ++nonzeros;
      }
    }
    if (nonzeros == 1) owned[static_cast<std::size_t>(owner)] = true;
  }
  return owned;
}

std::vector<Index> independent_rows(const Matrix& A, const Vector& b) {
  const std::vector<bool> owned = rows_with_private_columns(A);
  std::vector<Index> all(static_cast<std::size_t>(A.rows()));
  std::vector<Index> shared;
  for (Index i = 0; i < A.rows(); ++i) {
    all[static_cast<std::size_t>(i)] = i;
    if (!owned[static_cast<std::size_t>(i)]) shared.push_back(i);
  }
  if (shared.empty()) return all;

  const auto ns = static_cast<Index>(shared.size());
  Matrix S(ns, A.cols());
  for (Index k = 0; k < ns; ++k) S.row(k) = A.row(shared[static_cast<std::size_t>(k)]);
  Eigen::ColPivHouseholderQR<Matrix> qr(S.transpose());
  qr.setThreshold(1e-12);
  const Index rank = qr.rank();
  if (rank == ns) return all;

  std::vector<Index> kept_shared;
  for (Index k = 0; k < rank; ++k) kept_shared.push_back(qr.colsPermutation().indices()[k]);
  std::sort(kept_shared.begin(), kept_shared.end());

  // Every dropped row must be implied by the kept ones, right-hand side included.
  Matrix basis(A.cols(), rank);
  Vector basis_rhs(rank);
  for (Index k = 0; k < rank; ++k) {
    const Index row = shared[static_cast<std::size_t>(kept_shared[static_cast<std::size_t>(k)])];
    basis.col(k) = A.row(row).transpose();
    basis_rhs[k] = b[row];
  }
  Eigen::ColPivHouseholderQR<Matrix> basis_qr(basis);
  std::vector<bool> dropped(static_cast<std::size_t>(A.rows()), false);
  for (Index k = 0; k < ns; ++k) {
    if (std::binary_search(kept_shared.begin(), kept_shared.end(), k)) continue;
    const Index row = shared[static_cast<std::size_t>(k)];
    Vector z = basis_qr.solve(Vector(A.row(row).transpose()));
    if (std::abs(z.dot(basis_rhs) - b[row]) > 1e-9 * (1.0 + std::abs(b[row]))) {
      throw ContractViolation("equality constraints are inconsistent (row " + std::to_string(row) + ")");
    }
    dropped[static_cast<std::size_t>(row)] = true;
  }
  std::vector<Index> kept;
  for (Index i = 0; i < A.rows(); ++i) {
    if (!dropped[static_cast<std::size_t>(i)]) kept.push_back(i);
  }
  return kept;
}

double max_step(const Vector& v, const Vector& dv, const std::vector<bool>& free) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < v.size(); ++j) {
    if (free[static_cast<std::size_t>(j)]) continue;
    if (dv[j] < 0.0) alpha = std::min(alpha, -v[j] / dv[j]);
  }
  return alpha;
}

// Solves the reduced Newton system
//
//   [ K     A_F ] [dy  ]   [h]
//   [ A_F'  0   ] [dx_F] = [g],    K = A D A' + reg I,
//
// where D is zero on the free columns.
class NewtonSystem {
 public:
  NewtonSystem(const StandardFormLP& lp, const Vector& d, double reg, const IterateState& state)
      : A_(*lp.A) {
    const Index m = A_.rows();
    Matrix AD = A_ * d.asDiagonal();
    Matrix K = AD * A_.transpose();
    K.diagonal().array() += reg;
    llt_.compute(K);
    if (llt_.info() != Eigen::Success) {
      // Badly scaled late iterates can make K numerically indefinite. Retry
      // with growing diagonal shifts relative to its largest entry; the
      // refinement pass in direction() absorbs the perturbation.
      const double scale = std::max(K.diagonal().maxCoeff(), 1.0);
      bool ok = false;
      for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
        Matrix shifted = K;
        shifted.diagonal().array() += scale * 1e-14 * std::pow(100.0, attempt);
        llt_.compute(shifted);
        ok = llt_.info() == Eigen::Success;
      }
      if (!ok) {
        use_ldlt_ = true;
        ldlt_.compute(K);
        if (ldlt_.info() != Eigen::Success || !ldlt_.isPositive()) {
          throw SolverFailure("normal equations are singular", state);
        }
      }
    }
    for (Index j = 0; j < A_.cols(); ++j) {
      if (lp.free[static_cast<std::size_t>(j)]) free_cols_.push_back(j);
    }
    if (!free_cols_.empty()) {
      const Index f = static_cast<Index>(free_cols_.size());
      AF_.resize(m, f);
      for (Index k = 0; k < f; ++k) AF_.col(k) = A_.col(free_cols_[static_cast<std::size_t>(k)]);
      W_ = solve_k(AF_);
      schur_.compute(AF_.transpose() * W_);
      if (schur_.info() != Eigen::Success) throw SolverFailure("free-column Schur complement is singular", state);
    }
  }

  const std::vector<Index>& free_cols() const { return free_cols_; }

  // Returns dy and fills dx_free.
  Vector solve(const Vector& h, const Vector& g, Vector& dx_free) const {
    Vector t = solve_k(h);
    if (free_cols_.empty()) {
      dx_free.resize(0);
      return t;
    }
    dx_free = schur_.solve(AF_.transpose() * t - g);
    return t - W_ * dx_free;
  }

 private:
  template <typename Rhs>
  Matrix solve_k(const Rhs& r) const {
    return use_ldlt_ ? Matrix(ldlt_.solve(r)) : Matrix(llt_.solve(r));
  }

  const Matrix& A_;
  Eigen::LLT<Matrix> llt_;
  Eigen::LDLT<Matrix> ldlt_;
  bool use_ldlt_ = false;
  std::vector<Index> free_cols_;
  Matrix AF_;
  Matrix W_;
  Eigen::LDLT<Matrix> schur_;
};

struct Direction {
  Vector dx, dy, ds;
};

// Newton direction for complementarity target r_xs (entries on free columns
// are ignored), with one round of iterative refinement on A dx = -r_b.
Direction direction(const StandardFormLP& lp, const NewtonSystem& sys, const IterateState& st,
                    const Vector& d, const Vector& rb, const Vector& rc, const Vector& r_xs) {
  const Matrix& A = *lp.A;
  const Index n = A.cols();
  Vector base(n);
  for (Index j = 0; j < n; ++j) {
    base[j] = lp.free[static_cast<std::size_t>(j)] ? 0.0 : r_xs[j] / st.s[j] + d[j] * rc[j];
  }
  Vector g(static_cast<Index>(sys.free_cols().size()));
  for (Index k = 0; k < g.size(); ++k) g[k] = -rc[sys.free_cols()[static_cast<std::size_t>(k)]];

  Vector dx_free;
  Vector h = -rb - A * base;
  Direction dir;
  dir.dy = sys.solve(h, g, dx_free);
  Vector Aty = A.transpose() * dir.dy;
  dir.dx = base + d.cwiseProduct(Aty);
  dir.ds = -rc - Aty;
  for (std::size_t k = 0; k < sys.free_cols().size(); ++k) {
    const Index j = sys.free_cols()[k];
    dir.dx[j] = dx_free[static_cast<Index>(k)];
    dir.ds[j] = 0.0;
  }

  Vector r1 = -rb - A * dir.dx;
  Vector dxf_corr;
  Vector dy_corr = sys.solve(r1, Vector::Zero(g.size()), dxf_corr);
  Vector Aty_corr = A.transpose() * dy_corr;
  dir.dy += dy_corr;
  dir.dx += d.cwiseProduct(Aty_corr);
  dir.ds -= Aty_corr;
  for (std::size_t k = 0; k < sys.free_cols().size(); ++k) {
    const Index j = sys.free_cols()[k];
    dir.dx[j] += dxf_corr[static_cast<Index>(k)];
    dir.ds[j] = 0.0;
  }
  return dir;
}

Index count_nonfree(const std::vector<bool>& free) {
  return static_cast<Index>(std::count(free.begin(), free.end(), false));
}

}  // namespace

Index StandardFormLP::num_free() const {
  return static_cast<Index>(std::count(free.begin(), free.end(), true));
}

Vector StandardFormLP::source_values(const Vector& x) const {
  Vector v(static_cast<Index>(plus_column.size()));
  for (std::size_t j = 0; j < plus_column.size(); ++j) {
    double value = x[plus_column[j]];
    if (minus_column[j] >= 0) value -= x[minus_column[j]];
    v[static_cast<Index>(j)] = value;
  }
  return v;
}

Vector StandardFormLP::standard_point(const Vector& source) const {
  if (source.size() != static_cast<Index>(plus_column.size())) {
    throw ContractViolation("warm start has " + std::to_string(source.size()) + " values, expected " +
                            std::to_string(plus_column.size()));
  }
  Vector x = Vector::Zero(cols());
  for (std::size_t j = 0; j < plus_column.size(); ++j) {
    const double v = source[static_cast<Index>(j)];
    if (minus_column[j] >= 0) {
      x[plus_column[j]] = std::max(v, 0.0);
      x[minus_column[j]] = std::max(-v, 0.0);
    } else {
      x[plus_column[j]] = v;
    }
  }
  std::vector<Index> standard_row(slack_column.size(), -1);
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    standard_row[static_cast<std::size_t>(kept_rows[r])] = static_cast<Index>(r);
  }
  for (std::size_t r = 0; r < slack_column.size(); ++r) {
    const Index col = slack_column[r];
    if (col < 0) continue;
    const Index row = standard_row[r];
    const double coef = (*A)(row, col);
    x[col] = (b[row] - A->row(row).dot(x)) / coef;
  }
  return x;
}

void StandardFormLP::set_source_objective(const Vector& objective) {
  if (objective.size() != static_cast<Index>(plus_column.size())) {
    throw ContractViolation("objective length does not match the number of source variables");
  }
  c.setZero(cols());
  for (std::size_t j = 0; j < plus_column.size(); ++j) {
    const double cj = objective_sign * objective[static_cast<Index>(j)];
    c[plus_column[j]] = cj;
    if (minus_column[j] >= 0) c[minus_column[j]] = -cj;
  }
}

void StandardFormLP::set_source_rhs(const Vector& rhs) {
  if (rhs.size() != static_cast<Index>(slack_column.size())) {
    throw ContractViolation("right-hand side length does not match the number of source rows");
  }
  b.resize(rows());
  for (std::size_t r = 0; r < kept_rows.size(); ++r) b[static_cast<Index>(r)] = rhs[kept_rows[r]];
}

StandardFormLP to_standard_form(const LinearProgram& program, FreeVariables mode) {
  const Index nv = program.num_variables();
  const Index nr = program.num_constraints();
  if (static_cast<Index>(program.kinds.size()) != nv || program.rows.cols() != nv ||
      static_cast<Index>(program.relations.size()) != nr || program.rhs.size() != nr) {
    throw ContractViolation("linear program dimensions are inconsistent");
  }

  StandardFormLP lp;
  lp.objective_sign = program.sense == Sense::Minimize ? 1.0 : -1.0;
  lp.plus_column.assign(static_cast<std::size_t>(nv), -1);
  lp.minus_column.assign(static_cast<std::size_t>(nv), -1);
  lp.slack_column.assign(static_cast<std::size_t>(nr), -1);
  lp.slack_sign.assign(static_cast<std::size_t>(nr), 0.0);

  Index cols = 0;
  for (Index j = 0; j < nv; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    lp.plus_column[ju] = cols++;
    lp.free.push_back(program.kinds[ju] == VarKind::Free && mode == FreeVariables::Native);
    if (program.kinds[ju] == VarKind::Free && mode == FreeVariables::Split) {
      lp.minus_column[ju] = cols++;
      lp.free.push_back(false);
    }
  }
  for (Index r = 0; r < nr; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    if (program.relations[ru] == Relation::Equal) continue;
    lp.slack_column[ru] = cols++;
    lp.slack_sign[ru] = program.relations[ru] == Relation::LessEqual ? 1.0 : -1.0;
    lp.free.push_back(false);
  }

  Matrix A = Matrix::Zero(nr, cols);
  for (Index r = 0; r < nr; ++r) {
    for (Index j = 0; j < nv; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      A(r, lp.plus_column[ju]) = program.rows(r, j);
      if (lp.minus_column[ju] >= 0) A(r, lp.minus_column[ju]) = -program.rows(r, j);
    }
    const auto ru = static_cast<std::size_t>(r);
    if (lp.slack_column[ru] >= 0) A(r, lp.slack_column[ru]) = lp.slack_sign[ru];
  }

  lp.kept_rows = independent_rows(A, program.rhs);
  if (static_cast<Index>(lp.kept_rows.size()) == nr) {
    lp.A = std::make_shared<const Matrix>(std::move(A));
  } else {
    Matrix reduced(static_cast<Index>(lp.kept_rows.size()), cols);
    for (std::size_t r = 0; r < lp.kept_rows.size(); ++r) reduced.row(static_cast<Index>(r)) = A.row(lp.kept_rows[r]);
    lp.A = std::make_shared<const Matrix>(std::move(reduced));
  }
  lp.set_source_objective(program.objective);
  lp.set_source_rhs(program.rhs);
  return lp;
}

void refresh(const StandardFormLP& lp, IterateState& st) {
  const Matrix& A = *lp.A;
  st.r_primal = inf_norm(A * st.x - lp.b);
  st.r_dual = inf_norm(A.transpose() * st.y + st.s - lp.c);
  const Index nonfree = count_nonfree(lp.free);
  st.mu = nonfree > 0 ? st.x.dot(st.s) / static_cast<double>(nonfree) : 0.0;
  st.primal_value = lp.c.dot(st.x);
  st.dual_value = lp.b.dot(st.y);
}

IterateState pd_init(const StandardFormLP& lp, const std::optional<WarmStart>& warm,
                     const SolverOptions& options) {
  const Matrix& A = *lp.A;
  const Index n = lp.cols();
  const Index m = lp.rows();
  const double floor = options.interior_floor;
  const double tol = options.feasibility_tolerance;

  IterateState st;
  const double xi_p = std::max(1.0, inf_norm(lp.b));
  const double xi_d = std::max(1.0, inf_norm(lp.c));
  st.x = Vector::Constant(n, xi_p);
  st.s = Vector::Constant(n, xi_d);
  st.y = Vector::Zero(m);
  for (Index j = 0; j < n; ++j) {
    if (lp.free[static_cast<std::size_t>(j)]) st.x[j] = st.s[j] = 0.0;
  }

  // Lift to the interior floor, unless the point already is strictly
  // interior and feasible and lifting would destroy that feasibility.
  auto interiorize = [&](const Vector& v, auto residual) {
    Vector lifted = v;
    bool strictly_positive = true;
    for (Index j = 0; j < n; ++j) {
      if (lp.free[static_cast<std::size_t>(j)]) continue;
      strictly_positive = strictly_positive && v[j] > 0.0;
      lifted[j] = std::max(v[j], floor);
    }
    if (strictly_positive && residual(v) <= tol && residual(lifted) > tol) return v;
    return lifted;
  };

  if (warm && warm->primal) {
    Vector x = lp.standard_point(*warm->primal);
    // Split pairs are shifted together so their difference is unchanged.
    for (std::size_t j = 0; j < lp.minus_column.size(); ++j) {
      const Index mc = lp.minus_column[j];
      if (mc < 0) continue;
      const Index pc = lp.plus_column[j];
      const double shift = std::max(0.0, floor - std::min(x[pc], x[mc]));
      x[pc] += shift;
      x[mc] += shift;
    }
    st.x = interiorize(x, [&](const Vector& v) { return inf_norm(A * v - lp.b); });
  }
  if (warm && warm->dual) {
    const Vector& dual = *warm->dual;
    if (dual.size() != static_cast<Index>(lp.slack_column.size())) {
      throw ContractViolation("dual warm start has " + std::to_string(dual.size()) +
                              " multipliers, expected " + std::to_string(lp.slack_column.size()));
    }
    for (std::size_t r = 0; r < lp.kept_rows.size(); ++r) st.y[static_cast<Index>(r)] = dual[lp.kept_rows[r]];
    Vector s = lp.c - A.transpose() * st.y;
    for (Index j = 0; j < n; ++j) {
      if (lp.free[static_cast<std::size_t>(j)]) s[j] = 0.0;
    }
    const Vector Aty = A.transpose() * st.y;
    st.s = interiorize(s, [&](const Vector& v) {
      Vector r = Aty + v - lp.c;
      return inf_norm(r);
    });
  }
  refresh(lp, st);
  return st;
}

IterateState pd_step(const StandardFormLP& lp, const IterateState& state, const SolverOptions& options) {
  const Matrix& A = *lp.A;
  const Index n = lp.cols();
  const Index nonfree = count_nonfree(lp.free);

  if (!state.x.allFinite() || !state.y.allFinite() || !state.s.allFinite()) {
    throw SolverFailure("iterate is not finite", state);
  }

  const Vector rb = A * state.x - lp.b;
  const Vector rc = A.transpose() * state.y + state.s - lp.c;

  Vector d = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    if (!lp.free[static_cast<std::size_t>(j)]) d[j] = state.x[j] / state.s[j];
  }
  NewtonSystem sys(lp, d, options.regularization, state);

  const double mu = nonfree > 0 ? state.x.dot(state.s) / static_cast<double>(nonfree) : 0.0;

  // Predictor.
  Vector r_aff = -state.x.cwiseProduct(state.s);
  Direction aff = direction(lp, sys, state, d, rb, rc, r_aff);
  const double ap_aff = std::min(1.0, max_step(state.x, aff.dx, lp.free));
  const double ad_aff = std::min(1.0, max_step(state.s, aff.ds, lp.free));
  double mu_aff = 0.0;
  for (Index j = 0; j < n; ++j) {
    if (lp.free[static_cast<std::size_t>(j)]) continue;
    mu_aff += (state.x[j] + ap_aff * aff.dx[j]) * (state.s[j] + ad_aff * aff.ds[j]);
  }
  mu_aff = nonfree > 0 ? mu_aff / static_cast<double>(nonfree) : 0.0;
  const double sigma = mu > 0.0 ? std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3) : 0.0;

  // Corrector.
  Vector r_cc = r_aff - aff.dx.cwiseProduct(aff.ds);
  r_cc.array() += sigma * mu;
  Direction dir = direction(lp, sys, state, d, rb, rc, r_cc);

  const double ap = std::min(1.0, options.step_fraction * max_step(state.x, dir.dx, lp.free));
  const double ad = std::min(1.0, options.step_fraction * max_step(state.s, dir.ds, lp.free));

  IterateState next;
  next.x = state.x + ap * dir.dx;
  next.y = state.y + ad * dir.dy;
  next.s = state.s + ad * dir.ds;
  for (Index j = 0; j < n; ++j) {
    if (lp.free[static_cast<std::size_t>(j)]) next.s[j] = 0.0;
  }
  next.iteration = state.iteration + 1;
  refresh(lp, next);
  if (!next.x.allFinite() || !next.y.allFinite() || !next.s.allFinite()) {
    throw SolverFailure("step produced a non-finite iterate", state);
  }
  return next;
}

BoundsPair bounds(const IterateState& state, double feasibility_tolerance) {
  return BoundsPair{state.dual_value, state.primal_value,
                    state.r_primal < feasibility_tolerance && state.r_dual < feasibility_tolerance};
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "CONVERGED";
    case SolveStatus::EarlyStopped: return "EARLY_STOPPED";
    case SolveStatus::IterationLimit: return "ITERATION_LIMIT";
    case SolveStatus::Unbounded: return "UNBOUNDED";
    case SolveStatus::Infeasible: return "INFEASIBLE";
  }
  return "UNKNOWN";
}

SolveResult solve_to_tolerance(const StandardFormLP& lp, IterateState start, const SolverOptions& options,
                               const StopPredicate& stop) {
  if (!(options.epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  SolveResult result;
  result.state = std::move(start);
  while (result.iterations < options.max_iterations) {
    result.state = pd_step(lp, result.state, options);
    ++result.iterations;
    const IterateState& st = result.state;
    const BoundsPair bp = bounds(st, options.feasibility_tolerance);
    if (std::max({bp.gap(), st.r_primal, st.r_dual}) < options.epsilon) {
      result.status = SolveStatus::Converged;
      result.value = 0.5 * (bp.lower + bp.upper);
      return result;
    }
    if (stop && bp.certified && stop(bp)) {
      result.status = SolveStatus::EarlyStopped;
      return result;
    }
    const double primal_size = inf_norm(st.x);
    const double dual_size = std::max(inf_norm(st.y), inf_norm(st.s));
    if (primal_size > options.divergence_limit && dual_size <= options.divergence_limit) {
      result.status = SolveStatus::Unbounded;
      return result;
    }
    if (dual_size > options.divergence_limit) {
      result.status = SolveStatus::Infeasible;
      return result;
    }
  }
  result.status = SolveStatus::IterationLimit;
  return result;
}

SolveResult solve_to_tolerance(const StandardFormLP& lp, const SolverOptions& options, const StopPredicate& stop) {
  return solve_to_tolerance(lp, pd_init(lp, std::nullopt, options), options, stop);
}

}  // namespace credal::lp
