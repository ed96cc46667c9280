#include "credal/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "credal/natural_extension.hpp"
#include "credal/oracle.hpp"

namespace credal {

namespace {

using Index = Eigen::Index;

Vector uniform_vector(Substream& rng, std::size_t n) {
  Vector v(static_cast<Index>(n));
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.uniform();
  return v;
}

constexpr int kMaxAttempts = 20;

}  // namespace

void GenConfig::validate() const {
  if (n_omega == 0 || dom_size == 0 || k == 0 || s_coherent == 0) {
    throw ContractViolation("generator sizes must be positive");
  }
  if (!(margin > 0.0)) throw ContractViolation("generator margin must be positive");
  if (option && (*option < 'a' || *option > 'j')) {
    throw ContractViolation(std::string("unknown option '") + *option + "', expected a..j");
  }
}

Substream::Substream(std::uint64_t seed, std::uint64_t instance, Purpose purpose, std::uint32_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(instance), static_cast<std::uint32_t>(instance >> 32),
                    static_cast<std::uint32_t>(purpose), attempt};
  engine_.seed(seq);
}

double Substream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Substream::exponential() { return std::exponential_distribution<double>(1.0)(engine_); }

Pmf random_pmf(Substream& rng, std::size_t n) {
  Vector v(static_cast<Index>(n));
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.exponential();
  v /= v.sum();
  return Pmf(std::move(v));
}

namespace {

std::vector<Pmf> sample_envelope(Substream& rng, const GenConfig& cfg) {
  std::vector<Pmf> pmfs;
  pmfs.reserve(cfg.s_coherent);
  for (std::size_t j = 0; j < cfg.s_coherent; ++j) pmfs.push_back(random_pmf(rng, cfg.n_omega));
  return pmfs;
}

}  // namespace

std::vector<Pmf> envelope_pmfs(const GenConfig& cfg) {
  cfg.validate();
  Substream rng(cfg.seed, cfg.instance, Substream::Prevision);
  return sample_envelope(rng, cfg);
}

LowerPrevision gen_lower_prevision(const GenConfig& cfg) {
  cfg.validate();
  Substream rng(cfg.seed, cfg.instance, Substream::Prevision);
  const std::vector<Pmf> pmfs = sample_envelope(rng, cfg);

  std::vector<PriceAssessment> entries;
  entries.reserve(cfg.dom_size);
  for (std::size_t i = 0; i < cfg.dom_size; ++i) {
    Gamble g(uniform_vector(rng, cfg.n_omega));
    double price = std::numeric_limits<double>::infinity();
    for (const Pmf& p : pmfs) price = std::min(price, expectation(p, g));
    entries.push_back({std::move(g), price});
  }
  return LowerPrevision(PossibilitySpace(cfg.n_omega), std::move(entries));
}

GambleSet gen_gamble_set(const GenConfig& cfg) {
  cfg.validate();
  Substream rng(cfg.seed, cfg.instance, Substream::Gambles);
  std::vector<Gamble> members;
  members.reserve(cfg.k);
  for (std::size_t i = 0; i < cfg.k; ++i) members.emplace_back(uniform_vector(rng, cfg.n_omega));
  return GambleSet(PossibilitySpace(cfg.n_omega), std::move(members));
}

std::vector<std::pair<std::size_t, std::size_t>> option_grid(std::size_t k) {
  if (k == 0) throw ContractViolation("option grid needs k >= 1");
  std::size_t third = 0;
  std::size_t two_thirds = 0;
  switch (k) {
    case 16: third = 5; two_thirds = 11; break;
    case 64: third = 21; two_thirds = 42; break;
    case 256: third = 85; two_thirds = 170; break;
    default: {
      const double kd = static_cast<double>(k);
      third = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(kd / 3.0)), 1, k);
      two_thirds = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(2.0 * kd / 3.0)), third, k);
    }
  }
  return {{1, 1},         {1, third},           {1, two_thirds},      {1, k},     {third, third},
          {third, two_thirds}, {third, k}, {two_thirds, two_thirds}, {two_thirds, k}, {k, k}};
}

std::pair<std::size_t, std::size_t> option_counts(std::size_t k, char option) {
  if (option < 'a' || option > 'j') {
    throw ContractViolation(std::string("unknown option '") + option + "', expected a..j");
  }
  return option_grid(k)[static_cast<std::size_t>(option - 'a')];
}

GambleSet gen_controlled_set(const GenConfig& cfg, const LowerPrevision& P, std::size_t maximin,
                             std::size_t dominant) {
  cfg.validate();
  if (!(1 <= maximin && maximin <= dominant && dominant <= cfg.k)) {
    throw ContractViolation("controlled set needs 1 <= maximin <= dominant <= k, got (" + std::to_string(maximin) +
                            ", " + std::to_string(dominant) + ", " + std::to_string(cfg.k) + ")");
  }
  if (P.space().size() != cfg.n_omega) throw ContractViolation("prevision does not match n_omega");

  const double t = cfg.target;
  const double m = cfg.margin;
  const double min_width = 2.0 * m + 1e-3;
  const double spread = 0.5;

  for (std::uint32_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Substream rng(cfg.seed, cfg.instance, Substream::Controlled, attempt);
    std::vector<Gamble> members;
    members.reserve(cfg.k);
    for (std::size_t i = 0; i < cfg.k; ++i) {
      Gamble base(uniform_vector(rng, cfg.n_omega));
      double lo = oracle::oracle_natex(P, base, Bound::Lower);
      double hi = oracle::oracle_natex(P, base, Bound::Upper);
      if (i < maximin) {
        members.push_back(base + (t - lo));
      } else if (i < dominant) {
        // Must straddle t: lower value <= t - m, upper value >= t + m.
        const double width = hi - lo;
        if (width < min_width) {
          const double a = min_width / std::max(width, 1e-12);
          base = base * a;
          lo *= a;
          hi *= a;
        }
        const double target_lo = t - m - rng.uniform() * ((hi - lo) - 2.0 * m);
        members.push_back(base + (target_lo - lo));
      } else {
        const double target_hi = t - m - rng.uniform() * spread;
        members.push_back(base + (target_hi - hi));
      }
    }
    std::shuffle(members.begin(), members.end(), rng.engine());
    GambleSet K(P.space(), std::move(members));

    const oracle::OracleSets sets = oracle::oracle_opt_sets(P, K);
    if (sets.maximin.size() == maximin && sets.interval_dominant.size() == dominant) return K;
  }
  throw GenerationError("could not build a gamble set with counts (" + std::to_string(maximin) + ", " +
                        std::to_string(dominant) + ") after " + std::to_string(kMaxAttempts) + " attempts");
}

GambleSet gen_controlled_set(const GenConfig& cfg, const LowerPrevision& P) {
  if (!cfg.option) throw ContractViolation("controlled set requested without an option");
  const auto [maximin, dominant] = option_counts(cfg.k, *cfg.option);
  return gen_controlled_set(cfg, P, maximin, dominant);
}

}  // namespace credal
