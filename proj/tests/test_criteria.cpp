#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>

#include "credal/criteria.hpp"
#include "credal/oracle.hpp"
#include "support.hpp"

using namespace credal;
using V = std::vector<std::size_t>;

namespace {

V sorted(V v) {
  std::sort(v.begin(), v.end());
  return v;
}

V chosen(Algorithm a, const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {}) {
  return sorted(run_algorithm(a, P, K, opt).chosen);
}

GambleSet constants(std::initializer_list<double> values) {
  std::vector<Gamble> members;
  for (double v : values) members.push_back(Gamble::constant(2, v));
  return GambleSet(PossibilitySpace(2), members);
}

const std::vector<Algorithm> kMaximin{Algorithm::Maximin1, Algorithm::Maximin2, Algorithm::Maximin3};
const std::vector<Algorithm> kMaximax{Algorithm::Maximax1, Algorithm::Maximax2, Algorithm::Maximax3};
const std::vector<Algorithm> kId{Algorithm::Id1, Algorithm::Id2, Algorithm::Id3, Algorithm::Id4};

}  // namespace

TEST_CASE("labels") {
  CHECK(all_algorithms().size() == 10);
  for (Algorithm a : all_algorithms()) CHECK(parse_algorithm(label(a)) == a);
  CHECK(label(Algorithm::Id4) == "id4");
  CHECK_FALSE(parse_algorithm("maximin4"));
  CHECK(kind_of(Algorithm::Maximax2) == CriterionKind::Maximax);
  CHECK(kind_of(Algorithm::Id3) == CriterionKind::IntervalDominance);
}

TEST_CASE("running example") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet K = testing::set_r();
  for (Algorithm a : kMaximin) {
    CAPTURE(label(a));
    const auto r = run_algorithm(a, P, K);
    CHECK(r.chosen == V{1});
    CHECK(r.kind == CriterionKind::Maximin);
    if (r.value) CHECK(std::abs(*r.value - 0.5) <= 1e-7);
  }
  for (Algorithm a : kMaximax) {
    CAPTURE(label(a));
    const auto r = run_algorithm(a, P, K);
    CHECK(r.chosen == V{0});
    if (r.value) CHECK(std::abs(*r.value - 0.7) <= 1e-7);
  }
  for (Algorithm a : kId) {
    CAPTURE(label(a));
    const auto r = run_algorithm(a, P, K);
    CHECK(sorted(r.chosen) == V{0, 1});
    CHECK(sorted(r.maximin_set) == V{1});
  }
  CHECK(std::abs(*maximin_original(P, K).value - 0.5) <= 1e-8);
  CHECK(std::abs(*maximax_original(P, K).value - 0.7) <= 1e-8);
  CHECK(id_original(P, K).lp_sessions == 5);
}

TEST_CASE("singleton decision set") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet K(PossibilitySpace(2), {Gamble{0.2, 0.9}});
  for (Algorithm a : all_algorithms()) {
    CAPTURE(label(a));
    const auto r = run_algorithm(a, P, K);
    CHECK(r.chosen == V{0});
  }
  CHECK(id_original(P, K).lp_sessions == 1);
  CHECK(sorted(id_hybrid(P, K).maximin_set) == V{0});
}

TEST_CASE("ties") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet twice(PossibilitySpace(2), {Gamble{0.0, 1.0}, Gamble{0.5, 0.5}, Gamble{0.5, 0.5}});
  // Strict ">" keeps the first maximizer.
  CHECK(chosen(Algorithm::Maximin1, P, twice) == V{1});
  CHECK(chosen(Algorithm::Maximin2, P, twice) == V{1});
  CHECK(chosen(Algorithm::Maximin3, P, twice) == V{1, 2});

  const GambleSet top_twice(PossibilitySpace(2), {Gamble{0.2, 0.2}, Gamble{0.0, 1.0}, Gamble{0.0, 1.0}});
  CHECK(chosen(Algorithm::Maximax1, P, top_twice) == V{1});
  CHECK(chosen(Algorithm::Maximax2, P, top_twice) == V{1});
  CHECK(chosen(Algorithm::Maximax3, P, top_twice) == V{1, 2});

  const GambleSet all_same(PossibilitySpace(2), {Gamble{0.3, 0.6}, Gamble{0.3, 0.6}, Gamble{0.3, 0.6}});
  for (Algorithm a : kId) CHECK(chosen(a, P, all_same) == V{0, 1, 2});

  // Exact maximin tie plus a dominated third gamble.
  const GambleSet pair(PossibilitySpace(2), {Gamble{0.5, 0.5}, Gamble{0.1, 0.1}, Gamble{0.5, 0.5}});
  const auto hybrid = id_hybrid(P, pair);
  CHECK(sorted(hybrid.maximin_set) == V{0, 2});
  CHECK(sorted(hybrid.chosen) == V{0, 2});
}

TEST_CASE("constant gambles") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet K = constants({0.1, 0.9});
  const auto sorted_run = maximin_sorted(P, K);
  CHECK(sorted_run.chosen == V{1});
  CHECK(std::abs(*sorted_run.value - 0.9) <= 1e-7);
  // The second gamble visited (0.1) is settled by its upper bound.
  CHECK(sorted_run.lower_iterations[0] <= sorted_run.lower_iterations[1]);
  CHECK(maximax_original(P, constants({0.4})).chosen == V{0});
  CHECK(std::abs(*maximax_original(P, constants({0.4})).value - 0.4) <= 1e-8);
}

TEST_CASE("strict pointwise dominance is eliminated") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet K(PossibilitySpace(2), {Gamble{0.2, 0.3}, Gamble{0.6, 0.7}});
  const auto r = maximin_elimination(P, K);
  CHECK(r.chosen == V{1});
  CHECK(r.rounds >= 1);
}

TEST_CASE("id_original solves 2k-1 programs") {
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    const auto r = testing::random_instance(31, inst, 4, 3, 2 + inst);
    CHECK(id_original(r.P, r.K).lp_sessions == static_cast<int>(2 * r.K.size() - 1));
  }
}

TEST_CASE("observer sees every session") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet K = testing::set_r();
  std::atomic<int> calls{0};
  CriterionOptions opt;
  opt.observer = [&](std::size_t i, Bound, const NatexSession& s) {
    CHECK(i < K.size());
    CHECK(s.iterations() >= 0);
    ++calls;
  };
  const auto r = id_original(P, K, opt);
  CHECK(calls.load() >= r.lp_sessions);
}

TEST_CASE("threads inside a round do not change the answer") {
  for (std::uint64_t inst = 0; inst < 5; ++inst) {
    const auto r = testing::random_instance(8, inst, 8, 8, 12);
    CriterionOptions par;
    par.threads = 4;
    for (Algorithm a : {Algorithm::Maximin3, Algorithm::Maximax3, Algorithm::Id3, Algorithm::Id4}) {
      const auto seq = run_algorithm(a, r.P, r.K);
      const auto thr = run_algorithm(a, r.P, r.K, par);
      CHECK(seq.chosen == thr.chosen);
      CHECK(seq.total_iterations() == thr.total_iterations());
      CHECK(seq.lower_iterations == thr.lower_iterations);
    }
  }
}

TEST_CASE("errors") {
  const LowerPrevision P = testing::instance_r();
  const GambleSet wrong(PossibilitySpace(3), {Gamble{0.0, 1.0, 2.0}});
  for (Algorithm a : all_algorithms()) CHECK_THROWS_AS(run_algorithm(a, P, wrong), ContractViolation);
  const LowerPrevision loss(PossibilitySpace(2), {{Gamble{1.0, 0.0}, 1.2}});
  CHECK_THROWS_AS(maximin_sorted(loss, testing::set_r()), NotAvoidingSureLoss);

  CriterionOptions opt;
  opt.solver.max_iterations = 1;
  try {
    maximin_original(P, testing::set_r(), opt);
    FAIL("expected a solver failure");
  } catch (const lp::SolverFailure& e) {
    CHECK(std::string(e.what()).find("gamble 1") != std::string::npos);
  }
}

TEST_CASE("invariants on random instances") {
  for (std::uint64_t inst = 0; inst < 40; ++inst) {
    const std::size_t n = 2 + inst % 7, dom = 1 + inst % 5, k = 1 + inst % 9;
    const auto r = testing::random_instance(4242, inst, n, dom, k);
    const auto sets = oracle::oracle_opt_sets(r.P, r.K);
    CAPTURE(inst);
    std::vector<double> values;
    for (Algorithm a : all_algorithms()) {
      CAPTURE(label(a));
      const auto res = run_algorithm(a, r.P, r.K);
      CHECK(oracle::check_chosen(kind_of(a), res.chosen, sets, 1e-6, 1e-5) == "");
      for (std::size_t i : res.chosen) CHECK(i < k);
      if (kind_of(a) == CriterionKind::IntervalDominance) {
        for (std::size_t i : res.maximin_set) CHECK(std::count(res.chosen.begin(), res.chosen.end(), i) == 1);
        for (const auto* must : {&sets.maximin, &sets.maximax}) {
          if (sets.id_margin > 1e-5) {
            for (std::size_t i : *must) CHECK(std::count(res.chosen.begin(), res.chosen.end(), i) == 1);
          }
        }
      }
      if (a == Algorithm::Maximin1 || a == Algorithm::Maximin2) values.push_back(*res.value);
    }
    CHECK(std::abs(values[0] - values[1]) <= 3e-8);
  }
}
