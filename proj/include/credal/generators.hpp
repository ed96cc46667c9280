#pragma once

// Seeded random instances: envelope lower previsions, uniform gamble sets,
// and gamble sets with a prescribed number of maximin and interval-dominant
// members.

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "credal/core.hpp"

namespace credal {

struct GenConfig {
  std::uint64_t seed = 0;
  std::uint64_t instance = 0;  // substream index
  std::size_t n_omega = 4;
  std::size_t dom_size = 4;
  std::size_t k = 4;
  std::size_t s_coherent = 16;  // pmfs in the envelope
  std::optional<char> option;   // 'a' .. 'j'
  double margin = 1e-3;
  double target = 0.5;          // maximin value of a controlled set

  void validate() const;
};

/// Independent generator for one (seed, instance, purpose) triple. Streams
/// with different triples do not overlap in practice, so instances can be
/// produced in any order or concurrently with identical results.
class Substream {
 public:
  enum Purpose : std::uint32_t { Prevision = 1, Gambles = 2, Controlled = 3 };

  Substream(std::uint64_t seed, std::uint64_t instance, Purpose purpose, std::uint32_t attempt = 0);

  double uniform();      // [0, 1)
  double exponential();  // rate 1
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Uniform on the probability simplex.
Pmf random_pmf(Substream& rng, std::size_t n);

/// P(g) = min over `s_coherent` random pmfs of E_p(g), for `dom_size`
/// gambles with entries uniform on [0, 1].
LowerPrevision gen_lower_prevision(const GenConfig& cfg);
/// The pmfs whose lower envelope gen_lower_prevision(cfg) takes; each one
/// lies in its credal set.
std::vector<Pmf> envelope_pmfs(const GenConfig& cfg);

/// `k` gambles with entries uniform on [0, 1].
GambleSet gen_gamble_set(const GenConfig& cfg);

/// The ten (maximin count, interval-dominant count) options a .. j.
std::vector<std::pair<std::size_t, std::size_t>> option_grid(std::size_t k);
std::pair<std::size_t, std::size_t> option_counts(std::size_t k, char option);

/// A gamble set with exactly `maximin` members attaining the maximin value
/// cfg.target and exactly `dominant` interval-dominant members; every other
/// decision is at least cfg.margin away from its threshold. Checked against
/// the simplex oracle before returning; throws GenerationError when the
/// check keeps failing.
GambleSet gen_controlled_set(const GenConfig& cfg, const LowerPrevision& P, std::size_t maximin,
                             std::size_t dominant);
/// Counts taken from cfg.option.
GambleSet gen_controlled_set(const GenConfig& cfg, const LowerPrevision& P);

}  // namespace credal
