#pragma once

// Gamma-maximin, Gamma-maximax and interval dominance over a finite set of
// gambles. Three families of algorithms:
//
//   original     full cold-start solve of every LP, one gamble at a time
//   sorted       warm starts, gambles visited by decreasing E_p(f), and
//                per-LP early stopping once the bounds settle the decision
//   elimination  all candidates advanced in lock-step rounds, dropping those
//                whose upper bound falls below the best lower bound
//
// All index sets are 0-based.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "credal/core.hpp"
#include "credal/natural_extension.hpp"

namespace credal {

enum class CriterionKind { Maximin, Maximax, IntervalDominance };

enum class Algorithm {
  Maximin1,  // original
  Maximin2,  // sorted, early stopping
  Maximin3,  // elimination
  Maximax1,
  Maximax2,
  Maximax3,
  Id1,  // original, 2k-1 full solves
  Id2,  // sorted maximin, then two-sided early stopping
  Id3,  // interleaved lower and upper rounds
  Id4,  // elimination until a maximin candidate is found, then rounds
};

/// maximin1 ... id4
std::string label(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& label);
const std::vector<Algorithm>& all_algorithms();
CriterionKind kind_of(Algorithm a);

/// Called after every interior-point iteration (and once for each fresh
/// session) with the gamble index, the LP direction and the session. May be
/// called from worker threads when `threads > 1`.
using IterateObserver = std::function<void(std::size_t, Bound, const NatexSession&)>;

struct CriterionOptions {
  lp::SolverOptions solver;
  Orientation orientation = Orientation::Auto;
  /// Workers used inside one elimination round; the sequential algorithms
  /// ignore it.
  unsigned threads = 1;
  IterateObserver observer;
};

struct CriterionResult {
  Algorithm algorithm = Algorithm::Maximin1;
  CriterionKind kind = CriterionKind::Maximin;
  /// The answer: a single index for the original and sorted maximin/maximax
  /// algorithms, the surviving set for elimination, the set I for interval
  /// dominance.
  std::vector<std::size_t> chosen;
  /// Interval dominance only: the maximin index (Id1, Id2) or candidate
  /// set R (Id3, Id4).
  std::vector<std::size_t> maximin_set;
  /// Best lower value e / upper value e-bar for single-answer algorithms.
  std::optional<double> value;
  /// Final (M_*, M^*) of the rounds-based algorithms.
  std::optional<std::pair<double, double>> maximin_bounds;
  /// Interval dominance: indices added at the tolerance exit without being
  /// classified by their bounds.
  std::vector<std::size_t> undecided;

  std::vector<int> lower_iterations;  // per gamble
  std::vector<int> upper_iterations;
  std::vector<std::optional<double>> lower_values;  // set when the LP converged
  std::vector<std::optional<double>> upper_values;
  int lp_sessions = 0;
  int rounds = 0;
  int setup_iterations = 0;     // phase-one LP
  std::int64_t setup_ns = 0;    // phase one plus sorting

  /// Interior-point iterations over every LP, phase one included.
  std::int64_t total_iterations() const;
};

CriterionResult maximin_original(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult maximax_original(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult id_original(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult maximin_sorted(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult maximax_sorted(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult id_staged(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult maximin_elimination(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult maximax_elimination(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult id_interleaved(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});
CriterionResult id_hybrid(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt = {});

CriterionResult run_algorithm(Algorithm a, const LowerPrevision& P, const GambleSet& K,
                              const CriterionOptions& opt = {});

}  // namespace credal
