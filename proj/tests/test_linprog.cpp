#include <doctest.h>

#include <cmath>
#include <random>

#include "credal/linprog.hpp"
#include "credal/natural_extension.hpp"
#include "credal/oracle.hpp"
#include "support.hpp"

using namespace credal;
using namespace credal::lp;

namespace {

LinearProgram forced_one() {
  // min x s.t. x = 1
  LinearProgram p;
  p.objective = Vector::Ones(1);
  p.kinds = {VarKind::NonNegative};
  p.rows = Matrix::Ones(1, 1);
  p.relations = {Relation::Equal};
  p.rhs = Vector::Ones(1);
  return p;
}

// Lower natural extension of f = (0, 1) under R over the credal set.
StandardFormLP credal_lower_r() {
  return build_lower(testing::instance_r(), Gamble{0.0, 1.0}, Orientation::Credal).lp;
}

// Random feasible, bounded LP: b = A x0 and c = A'y0 + s0 with x0, s0 > 0.
StandardFormLP random_lp(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  LinearProgram p;
  p.rows = Matrix::NullaryExpr(m, n, [&] { return u(rng); });
  const Vector x0 = Vector::NullaryExpr(n, [&] { return pos(rng); });
  const Vector y0 = Vector::NullaryExpr(m, [&] { return u(rng); });
  const Vector s0 = Vector::NullaryExpr(n, [&] { return pos(rng); });
  p.objective = p.rows.transpose() * y0 + s0;
  p.rhs = p.rows * x0;
  p.kinds.assign(static_cast<std::size_t>(n), VarKind::NonNegative);
  p.relations.assign(static_cast<std::size_t>(m), Relation::Equal);
  return to_standard_form(p);
}

}  // namespace

TEST_CASE("to_standard_form: max alpha s.t. alpha <= f(w)") {
  LinearProgram p;
  p.sense = Sense::Maximize;
  p.objective = Vector::Ones(1);
  p.kinds = {VarKind::Free};
  p.rows = Matrix::Ones(2, 1);
  p.relations = {Relation::LessEqual, Relation::LessEqual};
  p.rhs = Vector(2);
  p.rhs << 0.0, 1.0;
  const StandardFormLP lp = to_standard_form(p, FreeVariables::Split);
  CHECK(lp.cols() == 4);
  CHECK(lp.rows() == 2);
  CHECK(lp.c[lp.plus_column[0]] == -1.0);
  CHECK(lp.c[lp.minus_column[0]] == 1.0);
  CHECK(lp.slack_column[0] >= 0);
  CHECK(lp.slack_column[1] >= 0);
  Vector x = Vector::Zero(4);
  x[lp.plus_column[0]] = 0.75;
  x[lp.minus_column[0]] = 1.0;
  CHECK(lp.source_values(x)[0] == -0.25);

  const StandardFormLP native = to_standard_form(p, FreeVariables::Native);
  CHECK(native.cols() == 3);
  CHECK(native.num_free() == 1);
}

TEST_CASE("to_standard_form: credal-side lower LP with two outcomes and one assessment") {
  const StandardFormLP lp = credal_lower_r();
  CHECK(lp.rows() == 2);
  CHECK(lp.cols() == 3);
}

TEST_CASE("to_standard_form: equalities only add no slacks, dependent rows are dropped") {
  LinearProgram p = forced_one();
  CHECK(to_standard_form(p).cols() == 1);
  p.rows = Matrix::Ones(2, 1);
  p.relations = {Relation::Equal, Relation::Equal};
  p.rhs = Vector::Ones(2);
  const StandardFormLP lp = to_standard_form(p);
  CHECK(lp.rows() == 1);
  CHECK(lp.kept_rows.size() == 1);

  LinearProgram bad = forced_one();
  bad.relations.clear();
  CHECK_THROWS_AS(to_standard_form(bad), ContractViolation);
}

TEST_CASE("pd_init") {
  SUBCASE("cold start") {
    const StandardFormLP lp = credal_lower_r();
    const IterateState st = pd_init(lp);
    CHECK(st.y.isZero());
    CHECK(st.x.minCoeff() == st.x.maxCoeff());
    CHECK(st.x.minCoeff() >= 1.0);
    CHECK(st.s.minCoeff() >= 1.0);
    CHECK(st.iteration == 0);
  }
  SUBCASE("direct start on the multiplier-side lower LP is primal feasible") {
    const LowerPrevision P = testing::instance_r();
    const Gamble f{0.0, 1.0};
    const NatexProblem prob = build_lower(P, f, Orientation::Multiplier);
    const MultiplierPoint mp = direct_dual_start(P, f, Bound::Lower);
    Vector source(1 + mp.lambda.size());
    source << mp.offset, mp.lambda;
    const IterateState st = pd_init(prob.lp, WarmStart{source, std::nullopt});
    CHECK(st.r_primal <= 1e-12);
    for (Eigen::Index j = 0; j < st.x.size(); ++j) {
      if (!prob.lp.free[static_cast<std::size_t>(j)]) CHECK(st.x[j] > 0.0);
    }
    CHECK_FALSE(bounds(st).certified);
  }
  SUBCASE("an infeasible warm start is accepted and shows in the residual") {
    const StandardFormLP lp = credal_lower_r();
    Vector p(2);
    p << 0.2, 0.7;  // sums to 0.9 and violates p1 >= 0.3
    const IterateState st = pd_init(lp, WarmStart{p, std::nullopt});
    CHECK(st.r_primal >= 0.1 - 1e-12);
    CHECK(st.x.minCoeff() > 0.0);
  }
}

TEST_CASE("pd_step and solve_to_tolerance") {
  SUBCASE("forced solution") {
    const StandardFormLP lp = to_standard_form(forced_one());
    SolverOptions opt;
    opt.epsilon = 1e-10;
    const SolveResult r = solve_to_tolerance(lp, opt);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.iterations <= 30);
    CHECK(std::abs(*r.value - 1.0) <= 1e-10);
  }
  SUBCASE("lower natural extension of (0,1) under R") {
    const StandardFormLP lp = credal_lower_r();
    IterateState st = pd_init(lp);
    for (int i = 0; i < 100 && st.mu >= 1e-9; ++i) st = pd_step(lp, st);
    CHECK(std::abs(st.primal_value) <= 1e-8);

    const SolveResult r = solve_to_tolerance(lp);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(std::abs(*r.value) <= 1e-8);
    CHECK(r.state.x.minCoeff() > 0.0);
    CHECK(r.state.s.minCoeff() > 0.0);
    CHECK(bounds(r.state).gap() < 1e-8);
  }
  SUBCASE("certified iterates bracket the optimum and stay feasible") {
    const StandardFormLP lp = credal_lower_r();
    IterateState st = pd_init(lp);
    bool seen_certified = false;
    for (int i = 0; i < 60; ++i) {
      st = pd_step(lp, st);
      const BoundsPair bp = bounds(st);
      if (seen_certified) {
        CHECK(st.r_primal < 1e-7);
        CHECK(st.r_dual < 1e-7);
      }
      if (bp.certified) {
        seen_certified = true;
        CHECK(bp.lower <= 1e-9);
        CHECK(bp.upper >= -1e-9);
      }
      if (st.mu < 1e-12) break;
    }
    CHECK(seen_certified);
  }
  SUBCASE("a stop predicate that cannot fire") {
    const SolveResult r =
        solve_to_tolerance(credal_lower_r(), SolverOptions{}, [](const BoundsPair& b) { return b.upper < -1.0; });
    CHECK(r.status == SolveStatus::Converged);
  }
  SUBCASE("a stop predicate that fires early") {
    const StandardFormLP lp = credal_lower_r();
    Vector p(2);
    p << 0.99, 0.01;
    const IterateState start = pd_init(lp, WarmStart{p, std::nullopt});
    const SolveResult r =
        solve_to_tolerance(lp, start, SolverOptions{}, [](const BoundsPair& b) { return b.upper < 0.05; });
    CHECK((r.status == SolveStatus::EarlyStopped || r.status == SolveStatus::Converged));
    if (r.status == SolveStatus::EarlyStopped) {
      CHECK_FALSE(r.value.has_value());
      CHECK(bounds(r.state).upper < 0.05);
    }
  }
  SUBCASE("iteration cap") {
    SolverOptions opt;
    opt.max_iterations = 2;
    const SolveResult r = solve_to_tolerance(credal_lower_r(), opt);
    CHECK(r.status == SolveStatus::IterationLimit);
    CHECK(r.iterations == 2);
  }
  SUBCASE("unbounded program does not converge") {
    // min -x1 s.t. x1 - x2 = 0
    LinearProgram p;
    p.objective = Vector(2);
    p.objective << -1.0, 0.0;
    p.kinds = {VarKind::NonNegative, VarKind::NonNegative};
    p.rows = Matrix(1, 2);
    p.rows << 1.0, -1.0;
    p.relations = {Relation::Equal};
    p.rhs = Vector::Zero(1);
    const StandardFormLP lp = to_standard_form(p);
    bool converged = false;
    try {
      converged = solve_to_tolerance(lp).status == SolveStatus::Converged;
    } catch (const SolverFailure&) {
    }
    CHECK_FALSE(converged);
  }
  CHECK_THROWS_AS(solve_to_tolerance(credal_lower_r(), SolverOptions{0.0}), ContractViolation);
}

TEST_CASE("split and native free columns agree") {
  const LowerPrevision P = testing::instance_r();
  for (const Gamble& f : {Gamble{0.0, 1.0}, Gamble{1.0, 0.0}, Gamble{0.4, 0.4}}) {
    const NatexProblem prob = build_lower(P, f, Orientation::Multiplier);
    const auto split = solve_to_tolerance(to_standard_form(prob.primal_program, FreeVariables::Split));
    const auto native = solve_to_tolerance(to_standard_form(prob.primal_program, FreeVariables::Native));
    REQUIRE(split.value);
    REQUIRE(native.value);
    CHECK(std::abs(*split.value - *native.value) <= 1e-7);
  }
}

TEST_CASE("property: random feasible bounded programs converge to the simplex optimum") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 49;
    const Eigen::Index m = 1 + (trial * 7) % n;
    const StandardFormLP lp = random_lp(rng, m, n);
    const SolveResult r = solve_to_tolerance(lp);
    REQUIRE(r.status == SolveStatus::Converged);
    CHECK(r.iterations <= 200);
    const auto ref = oracle::simplex_minimize(*lp.A, lp.b, lp.c);
    REQUIRE(ref.status == oracle::SimplexStatus::Optimal);
    CHECK(std::abs(*r.value - ref.value) <= 1e-6 * std::max(1.0, std::abs(ref.value)));
  }
}

TEST_CASE("property: identical inputs give bitwise identical iterates") {
  std::mt19937_64 rng(5);
  const StandardFormLP lp = random_lp(rng, 6, 15);
  IterateState a = pd_init(lp), b = pd_init(lp);
  for (int i = 0; i < 15; ++i) {
    a = pd_step(lp, a);
    b = pd_step(lp, b);
    REQUIRE(a.x == b.x);
    REQUIRE(a.y == b.y);
    REQUIRE(a.s == b.s);
  }
}
