#include "credal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace credal::oracle {

namespace {

using Index = Eigen::Index;

class Tableau {
 public:
  // Rows 0..m-1 are constraints, row m holds reduced costs; the last
  // column is the right-hand side.
  Tableau(Index m, Index n) : T_(Matrix::Zero(m + 1, n + 1)), basis_(static_cast<std::size_t>(m)) {}

  Matrix& data() { return T_; }
  std::vector<Index>& basis() { return basis_; }
  Index rows() const { return T_.rows() - 1; }
  Index cols() const { return T_.cols() - 1; }
  double objective() const { return -T_(rows(), cols()); }

  void pivot(Index r, Index c) {
    T_.row(r) /= T_(r, c);
    for (Index i = 0; i <= rows(); ++i) {
      if (i != r && T_(i, c) != 0.0) T_.row(i) -= T_(i, c) * T_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void set_costs(const Vector& cost) {
    T_.row(rows()).setZero();
    T_.row(rows()).head(cost.size()) = cost.transpose();
    for (Index r = 0; r < rows(); ++r) {
      const double cb = T_(rows(), basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) T_.row(rows()) -= cb * T_.row(r);
    }
  }

  // Bland's rule: smallest improving column, then smallest basic index among
  // minimum-ratio rows. Returns false when unbounded.
  bool optimize(Index allowed_cols, double tol) {
    for (;;) {
      Index enter = -1;
      for (Index j = 0; j < allowed_cols; ++j) {
        if (T_(rows(), j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index r = 0; r < rows(); ++r) {
        if (T_(r, enter) <= tol) continue;
        const double ratio = T_(r, cols()) / T_(r, enter);
        if (ratio < best - 1e-12) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + 1e-12 &&
                   basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  // Recomputes the constraint rows as B^{-1} [A | b] from the original data,
  // discarding round-off accumulated by pivoting. Artificial columns are
  // zeroed since they never re-enter.
  void reload(const Matrix& A, const Vector& b, const std::vector<Index>& rows_kept) {
    const Index m = rows();
    const Index n = A.cols();
    Matrix Ak(m, n);
    Vector bk(m);
    for (Index r = 0; r < m; ++r) {
      Ak.row(r) = A.row(rows_kept[static_cast<std::size_t>(r)]);
      bk[r] = b[rows_kept[static_cast<std::size_t>(r)]];
    }
    Matrix B(m, m);
    for (Index r = 0; r < m; ++r) B.col(r) = Ak.col(basis_[static_cast<std::size_t>(r)]);
    const Eigen::PartialPivLU<Matrix> lu(B);
    T_.topRows(m).setZero();
    T_.topLeftCorner(m, n) = lu.solve(Ak);
    T_.col(cols()).head(m) = lu.solve(bk);
    for (Index r = 0; r < m; ++r) {
      const Index j = basis_[static_cast<std::size_t>(r)];
      T_.col(j).head(m).setZero();
      T_(r, j) = 1.0;
    }
  }

  void drop_row(Index r) {
    const Index last = T_.rows() - 1;
    Matrix kept(T_.rows() - 1, T_.cols());
    kept.topRows(r) = T_.topRows(r);
    kept.bottomRows(last - r) = T_.bottomRows(last - r);
    T_ = std::move(kept);
    basis_.erase(basis_.begin() + r);
  }

 private:
  Matrix T_;
  std::vector<Index> basis_;
};

}  // namespace

SimplexResult simplex_minimize(const Matrix& A, const Vector& b, const Vector& c, double pivot_tol) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m || c.size() != n) throw ContractViolation("simplex: inconsistent dimensions");

  Tableau tab(m, n + m);
  Matrix& T = tab.data();
  Matrix As(m, n);
  Vector bs(m);
  for (Index r = 0; r < m; ++r) {
    const double s = b[r] < 0.0 ? -1.0 : 1.0;
    As.row(r) = s * A.row(r);
    bs[r] = s * b[r];
    T.row(r).head(n) = As.row(r);
    T(r, n + r) = 1.0;
    T(r, n + m) = bs[r];
    tab.basis()[static_cast<std::size_t>(r)] = n + r;
  }
  std::vector<Index> rows_kept(static_cast<std::size_t>(m));
  for (Index r = 0; r < m; ++r) rows_kept[static_cast<std::size_t>(r)] = r;

  Vector phase_one = Vector::Zero(n + m);
  phase_one.tail(m).setOnes();
  tab.set_costs(phase_one);
  tab.optimize(n + m, pivot_tol);
  const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  SimplexResult res;
  if (tab.objective() > 1e-9 * scale) {
    res.status = SimplexStatus::Infeasible;
    return res;
  }

  // Pivot remaining artificials out; rows where that is impossible are redundant.
  for (Index r = tab.rows() - 1; r >= 0; --r) {
    if (tab.basis()[static_cast<std::size_t>(r)] < n) continue;
    Index col = -1;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(tab.data()(r, j)) > pivot_tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(r, col);
    } else {
      tab.drop_row(r);
      rows_kept.erase(rows_kept.begin() + r);
    }
  }

  Vector cost = Vector::Zero(n + m);
  cost.head(n) = c;
  for (int round = 0; round < 8; ++round) {
    const std::vector<Index> before = tab.basis();
    tab.reload(As, bs, rows_kept);
    tab.set_costs(cost);
    if (!tab.optimize(n, pivot_tol)) {
      res.status = SimplexStatus::Unbounded;
      return res;
    }
    if (tab.basis() == before) break;
  }
  res.status = SimplexStatus::Optimal;
  res.x = Vector::Zero(n);
  for (Index r = 0; r < tab.rows(); ++r) {
    const Index j = tab.basis()[static_cast<std::size_t>(r)];
    if (j < n) res.x[j] = tab.data()(r, tab.cols());
  }
  res.value = c.dot(res.x);
  return res;
}

double oracle_natex(const LowerPrevision& P, const Gamble& f, Bound sense) {
  if (f.size() != P.space().size()) throw ContractViolation("gamble does not match the possibility space");
  const Matrix& G = P.centered();
  const Index m = G.rows();
  const Index n = G.cols();
  // Variables: p (n), surplus (m).  G p - surplus = 0, 1'p = 1.
  Matrix A = Matrix::Zero(m + 1, n + m);
  A.topLeftCorner(m, n) = G;
  A.topRightCorner(m, m) = -Matrix::Identity(m, m);
  A.block(m, 0, 1, n).setOnes();
  Vector b = Vector::Zero(m + 1);
  b[m] = 1.0;
  Vector c = Vector::Zero(n + m);
  c.head(n) = sense == Bound::Lower ? f.payoffs() : Vector(-f.payoffs());

  const SimplexResult res = simplex_minimize(A, b, c);
  if (res.status == SimplexStatus::Infeasible) throw NotAvoidingSureLoss(-1.0);
  if (res.status == SimplexStatus::Unbounded) throw std::logic_error("credal LP reported unbounded");
  return sense == Bound::Lower ? res.value : -res.value;
}

OracleSets oracle_opt_sets(const LowerPrevision& P, const GambleSet& K, double tol) {
  OracleSets out;
  const std::size_t k = K.size();
  for (std::size_t i = 0; i < k; ++i) {
    out.e_values.push_back(oracle_natex(P, K[i], Bound::Lower));
    out.ebar_values.push_back(oracle_natex(P, K[i], Bound::Upper));
  }
  out.max_lower = *std::max_element(out.e_values.begin(), out.e_values.end());
  out.max_upper = *std::max_element(out.ebar_values.begin(), out.ebar_values.end());

  const double inf = std::numeric_limits<double>::infinity();
  out.maximin_margin = out.maximax_margin = out.id_margin = inf;
  for (std::size_t i = 0; i < k; ++i) {
    const double e = out.e_values[i];
    const double ebar = out.ebar_values[i];
    if (e >= out.max_lower - tol) {
      out.maximin.push_back(i);
    } else {
      out.maximin_margin = std::min(out.maximin_margin, out.max_lower - e);
    }
    if (ebar >= out.max_upper - tol) {
      out.maximax.push_back(i);
    } else {
      out.maximax_margin = std::min(out.maximax_margin, out.max_upper - ebar);
    }
    if (ebar >= out.max_lower - tol) out.interval_dominant.push_back(i);
    if (e < out.max_lower - tol) out.id_margin = std::min(out.id_margin, std::abs(ebar - out.max_lower));
  }
  return out;
}

namespace {

std::string format_set(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

}  // namespace

std::string check_chosen(CriterionKind kind, const std::vector<std::size_t>& chosen, const OracleSets& sets,
                         double tol, double margin_floor) {
  const std::size_t k = sets.e_values.size();
  if (chosen.empty()) return "empty answer";
  for (std::size_t i : chosen) {
    if (i >= k) return "index " + std::to_string(i + 1) + " out of range";
  }
  switch (kind) {
    case CriterionKind::Maximin:
    case CriterionKind::Maximax: {
      const bool lower = kind == CriterionKind::Maximin;
      const auto& values = lower ? sets.e_values : sets.ebar_values;
      const double best = lower ? sets.max_lower : sets.max_upper;
      for (std::size_t i : chosen) {
        if (values[i] < best - tol) {
          return "gamble " + std::to_string(i + 1) + " has value " + std::to_string(values[i]) + ", optimum is " +
                 std::to_string(best);
        }
      }
      return {};
    }
    case CriterionKind::IntervalDominance: {
      std::vector<std::size_t> sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      if (sets.id_margin > margin_floor) {
        if (sorted != sets.interval_dominant) {
          return "set " + format_set(sorted) + ", oracle " + format_set(sets.interval_dominant);
        }
        return {};
      }
      for (const auto* required : {&sets.maximin, &sets.maximax}) {
        for (std::size_t i : *required) {
          if (!std::binary_search(sorted.begin(), sorted.end(), i)) {
            return "optimal gamble " + std::to_string(i + 1) + " missing from " + format_set(sorted);
          }
        }
      }
      for (std::size_t i : sorted) {
        if (sets.ebar_values[i] < sets.max_lower - tol) {
          return "gamble " + std::to_string(i + 1) + " is interval dominated";
        }
      }
      return {};
    }
  }
  return {};
}

}  // namespace credal::oracle
