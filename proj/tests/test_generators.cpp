#include <doctest.h>

#include <chrono>
#include <cmath>

#include "credal/generators.hpp"
#include "credal/natural_extension.hpp"
#include "credal/oracle.hpp"

using namespace credal;
using Pair = std::pair<std::size_t, std::size_t>;

namespace {

GenConfig config(std::uint64_t seed, std::uint64_t instance, std::size_t n, std::size_t dom, std::size_t k) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.instance = instance;
  cfg.n_omega = n;
  cfg.dom_size = dom;
  cfg.k = k;
  return cfg;
}

}  // namespace

TEST_CASE("option grid") {
  const std::vector<Pair> k16{{1, 1}, {1, 5}, {1, 11}, {1, 16}, {5, 5}, {5, 11}, {5, 16}, {11, 11}, {11, 16}, {16, 16}};
  CHECK(option_grid(16) == k16);
  const std::vector<Pair> k64{{1, 1},   {1, 21},  {1, 42},  {1, 64},  {21, 21},
                              {21, 42}, {21, 64}, {42, 42}, {42, 64}, {64, 64}};
  CHECK(option_grid(64) == k64);
  const std::vector<Pair> k256{{1, 1},     {1, 85},     {1, 170},    {1, 256},    {85, 85},
                               {85, 170},  {85, 256},   {170, 170},  {170, 256},  {256, 256}};
  CHECK(option_grid(256) == k256);
  CHECK(option_counts(16, 'f') == Pair{5, 11});
  for (std::size_t k : {1, 2, 3, 7, 30}) {
    for (const auto& [l, n] : option_grid(k)) {
      CHECK(1 <= l);
      CHECK(l <= n);
      CHECK(n <= k);
    }
  }
  CHECK_THROWS_AS(option_counts(16, 'k'), ContractViolation);
  CHECK_THROWS_AS(option_grid(0), ContractViolation);
}

TEST_CASE("config validation") {
  GenConfig cfg;
  cfg.n_omega = 0;
  CHECK_THROWS_AS(gen_lower_prevision(cfg), ContractViolation);
  cfg = GenConfig{};
  cfg.margin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg = GenConfig{};
  cfg.option = 'q';
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
}

TEST_CASE("lower envelopes") {
  SUBCASE("a single pmf gives its expectations") {
    GenConfig cfg = config(1, 0, 5, 3, 2);
    cfg.s_coherent = 1;
    const auto pmfs = envelope_pmfs(cfg);
    const LowerPrevision P = gen_lower_prevision(cfg);
    REQUIRE(pmfs.size() == 1);
    for (const auto& e : P.entries()) CHECK(e.price == expectation(pmfs[0], e.gamble));
  }
  SUBCASE("prices are envelope minima and every envelope pmf is in the credal set") {
    const GenConfig cfg = config(2, 4, 6, 8, 3);
    const auto pmfs = envelope_pmfs(cfg);
    const LowerPrevision P = gen_lower_prevision(cfg);
    CHECK(pmfs.size() == 16);
    for (const auto& e : P.entries()) {
      double lowest = std::numeric_limits<double>::infinity();
      for (const auto& p : pmfs) lowest = std::min(lowest, expectation(p, e.gamble));
      CHECK(std::abs(e.price - lowest) <= 1e-15);
      for (std::size_t w = 0; w < e.gamble.size(); ++w) {
        CHECK(e.gamble[w] >= 0.0);
        CHECK(e.gamble[w] < 1.0);
      }
    }
  }
  SUBCASE("every generated prevision avoids sure loss") {
    for (std::uint64_t inst = 0; inst < 50; ++inst) {
      const GenConfig cfg = config(99, inst, 1 + inst % 16, 1 + inst % 11, 1);
      CHECK(interior_credal_point(gen_lower_prevision(cfg)).margin > 0.0);
    }
  }
}

TEST_CASE("uniform gamble sets") {
  const GenConfig cfg = config(7, 3, 4, 2, 5);
  const GambleSet a = gen_gamble_set(cfg);
  const GambleSet b = gen_gamble_set(cfg);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].payoffs() == b[i].payoffs());
    CHECK(a[i].min() >= 0.0);
    CHECK(a[i].max() < 1.0);
  }
  GenConfig other = cfg;
  other.instance = 4;
  CHECK(gen_gamble_set(other)[0].payoffs() != a[0].payoffs());

  const auto t0 = std::chrono::steady_clock::now();
  const GambleSet big = gen_gamble_set(config(1, 0, 1024, 1, 1024));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(big.size() == 1024);
  CHECK(seconds < 1.0);
}

TEST_CASE("controlled sets") {
  GenConfig cfg = config(5, 0, 16, 16, 16);
  const LowerPrevision P = gen_lower_prevision(cfg);
  SUBCASE("option a") {
    cfg.option = 'a';
    const auto sets = oracle::oracle_opt_sets(P, gen_controlled_set(cfg, P));
    CHECK(sets.maximin.size() == 1);
    CHECK(sets.interval_dominant.size() == 1);
  }
  SUBCASE("option j") {
    cfg.option = 'j';
    const auto sets = oracle::oracle_opt_sets(P, gen_controlled_set(cfg, P));
    CHECK(sets.maximin.size() == 16);
    CHECK(sets.interval_dominant.size() == 16);
  }
  SUBCASE("thresholds and margins") {
    cfg.option = 'f';
    const GambleSet K = gen_controlled_set(cfg, P);
    const auto sets = oracle::oracle_opt_sets(P, K);
    CHECK(sets.maximin.size() == 5);
    CHECK(sets.interval_dominant.size() == 11);
    for (std::size_t i = 0; i < K.size(); ++i) {
      const double e = sets.e_values[i], ebar = sets.ebar_values[i];
      const bool maximin = std::count(sets.maximin.begin(), sets.maximin.end(), i) > 0;
      const bool dominant = std::count(sets.interval_dominant.begin(), sets.interval_dominant.end(), i) > 0;
      if (maximin) {
        CHECK(std::abs(e - cfg.target) <= 1e-6);
      } else if (dominant) {
        CHECK(e <= cfg.target - cfg.margin + 1e-6);
        CHECK(ebar >= cfg.target + cfg.margin - 1e-6);
      } else {
        CHECK(ebar <= cfg.target - cfg.margin + 1e-6);
      }
    }
    CHECK(gen_controlled_set(cfg, P)[3].payoffs() == K[3].payoffs());
  }
  SUBCASE("bad counts") {
    CHECK_THROWS_AS(gen_controlled_set(cfg, P, 3, 2), ContractViolation);
    CHECK_THROWS_AS(gen_controlled_set(cfg, P, 1, 17), ContractViolation);
    CHECK_THROWS_AS(gen_controlled_set(cfg, P), ContractViolation);
  }
}
