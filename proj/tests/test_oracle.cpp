#include <doctest.h>

#include <cmath>

#include "credal/generators.hpp"
#include "credal/oracle.hpp"
#include "support.hpp"

using namespace credal;
using namespace credal::oracle;
using V = std::vector<std::size_t>;

TEST_CASE("simplex_minimize") {
  SUBCASE("optimal") {
    // min x1 + x2 s.t. x1 + 2 x2 = 2: the vertex x2 = 1 costs 1.
    Matrix A(1, 2);
    A << 1.0, 2.0;
    const auto r = simplex_minimize(A, Vector::Constant(1, 2.0), Vector::Ones(2));
    REQUIRE(r.status == SimplexStatus::Optimal);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(1.0));
  }
  SUBCASE("infeasible") {
    const auto r = simplex_minimize(Matrix::Ones(1, 2), Vector::Constant(1, -1.0), Vector::Ones(2));
    CHECK(r.status == SimplexStatus::Infeasible);
  }
  SUBCASE("unbounded") {
    Matrix A(1, 2);
    A << 1.0, -1.0;
    Vector c(2);
    c << -1.0, 0.0;
    CHECK(simplex_minimize(A, Vector::Zero(1), c).status == SimplexStatus::Unbounded);
  }
  SUBCASE("degenerate program terminates") {
    // A cycling-prone shape: many ties in the ratio test.
    Matrix A(3, 6);
    A << 1, 1, 1, 1, 0, 0,
         1, -1, 1, 0, 1, 0,
         -1, 1, 1, 0, 0, 1;
    Vector b = Vector::Zero(3);
    b[0] = 1.0;
    Vector c(6);
    c << -1, -1, -1, 0, 0, 0;
    const auto r = simplex_minimize(A, b, c);
    REQUIRE(r.status == SimplexStatus::Optimal);
    CHECK(r.value == doctest::Approx(-1.0));
  }
}

TEST_CASE("oracle_natex") {
  const LowerPrevision P = testing::instance_r();
  CHECK(oracle_natex(P, Gamble{0.0, 1.0}, Bound::Lower) == doctest::Approx(0.0));
  CHECK(oracle_natex(P, Gamble{0.0, 1.0}, Bound::Upper) == doctest::Approx(0.7));
  CHECK(oracle_natex(P, Gamble{1.0, 0.0}, Bound::Lower) == doctest::Approx(0.3));
  CHECK(oracle_natex(P, Gamble{-2.5, -2.5}, Bound::Lower) == doctest::Approx(-2.5));
  CHECK(oracle_natex(P, Gamble{-2.5, -2.5}, Bound::Upper) == doctest::Approx(-2.5));
  const LowerPrevision bad(PossibilitySpace(2), {{Gamble{1.0, 0.0}, 1.2}});
  CHECK_THROWS_AS(oracle_natex(bad, Gamble{0.0, 1.0}, Bound::Lower), NotAvoidingSureLoss);
}

TEST_CASE("oracle_natex stays accurate on a long pivot sequence") {
  // Reference values from an independent LP solver (HiGHS).
  GenConfig cfg;
  cfg.seed = 23;
  cfg.instance = 20;
  cfg.n_omega = 6;
  cfg.dom_size = 56;
  cfg.k = 5;
  const LowerPrevision P = gen_lower_prevision(cfg);
  const GambleSet K = gen_gamble_set(cfg);
  CHECK(std::abs(oracle_natex(P, K[0], Bound::Lower) - 0.12235473765443397) <= 1e-9);
  CHECK(std::abs(oracle_natex(P, K[1], Bound::Upper) - 0.7680609817716925) <= 1e-9);
  CHECK(std::abs(oracle_natex(P, K[2], Bound::Lower) - 0.373018017925156) <= 1e-9);
}

TEST_CASE("oracle_opt_sets") {
  const LowerPrevision P = testing::instance_r();
  const OracleSets sets = oracle_opt_sets(P, testing::set_r());
  CHECK(sets.maximin == V{1});
  CHECK(sets.maximax == V{0});
  CHECK(sets.interval_dominant == V{0, 1});
  CHECK(sets.max_lower == doctest::Approx(0.5));
  CHECK(sets.max_upper == doctest::Approx(0.7));
  CHECK(sets.maximin_margin == doctest::Approx(0.3));
  CHECK(sets.maximax_margin == doctest::Approx(0.2));
  CHECK(sets.id_margin == doctest::Approx(0.2));

  const GambleSet same(PossibilitySpace(2), {Gamble{0.1, 0.9}, Gamble{0.1, 0.9}, Gamble{0.1, 0.9}});
  const OracleSets s2 = oracle_opt_sets(P, same);
  CHECK(s2.maximin == V{0, 1, 2});
  CHECK(s2.maximax == V{0, 1, 2});
  CHECK(s2.interval_dominant == V{0, 1, 2});
  CHECK(std::isinf(s2.id_margin));

  const OracleSets s3 = oracle_opt_sets(P, GambleSet(PossibilitySpace(2), {Gamble{0.0, 1.0}}));
  CHECK(s3.maximin == V{0});
  CHECK(s3.maximax == V{0});
  CHECK(s3.interval_dominant == V{0});
}

TEST_CASE("check_chosen") {
  const OracleSets sets = oracle_opt_sets(testing::instance_r(), testing::set_r());
  CHECK(check_chosen(CriterionKind::Maximin, {1}, sets).empty());
  CHECK_FALSE(check_chosen(CriterionKind::Maximin, {0}, sets).empty());
  CHECK_FALSE(check_chosen(CriterionKind::Maximin, {}, sets).empty());
  CHECK_FALSE(check_chosen(CriterionKind::Maximin, {7}, sets).empty());
  CHECK(check_chosen(CriterionKind::Maximax, {0}, sets).empty());
  CHECK(check_chosen(CriterionKind::IntervalDominance, {1, 0}, sets).empty());
  CHECK_FALSE(check_chosen(CriterionKind::IntervalDominance, {0, 1, 2}, sets).empty());
  CHECK_FALSE(check_chosen(CriterionKind::IntervalDominance, {1}, sets).empty());
}
