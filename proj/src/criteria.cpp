#include "credal/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

namespace credal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Index = std::size_t;
using IndexSet = std::vector<Index>;

const char* const kLabels[] = {"maximin1", "maximin2", "maximin3", "maximax1", "maximax2",
                               "maximax3", "id1",      "id2",      "id3",      "id4"};

// Best available bounds: exact once converged, certified otherwise.
double lower_of(const NatexSession& s) { return s.converged() ? s.raw_lower() : s.lower(); }
double upper_of(const NatexSession& s) { return s.converged() ? s.raw_upper() : s.upper(); }

class Run {
 public:
  Run(Algorithm a, const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt)
      : engine_(P, opt.solver, opt.orientation), K_(K), opt_(opt), lower_(K.size()), upper_(K.size()) {
    if (K.space().size() != P.space().size()) {
      throw ContractViolation("gamble set and lower prevision live on different possibility spaces");
    }
    result_.algorithm = a;
    result_.kind = kind_of(a);
  }

  std::size_t k() const { return K_.size(); }
  double epsilon() const { return opt_.solver.epsilon; }
  CriterionResult& result() { return result_; }

  // Phase one, plus the expectation ordering when `sorted`.
  IndexSet setup(bool sorted) {
    const auto t0 = std::chrono::steady_clock::now();
    const CredalStart& start = engine_.prepare_warm_starts();
    result_.setup_iterations = start.iterations;
    IndexSet order(k());
    std::iota(order.begin(), order.end(), Index{0});
    if (sorted) order = sort_by_expectation(K_, start.point);
    result_.setup_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
    return order;
  }

  NatexSession& open(Index i, Bound b, bool warm) {
    auto& slot = (b == Bound::Lower ? lower_ : upper_)[i];
    slot.emplace(warm ? engine_.warm_session(K_[i], b) : engine_.cold_session(K_[i], b));
    ++result_.lp_sessions;
    if (opt_.observer) opt_.observer(i, b, *slot);
    return *slot;
  }

  NatexSession& session(Index i, Bound b) { return *(b == Bound::Lower ? lower_ : upper_)[i]; }

  void step(Index i, Bound b) {
    NatexSession& s = session(i, b);
    try {
      s.step();
    } catch (const lp::SolverFailure& e) {
      throw lp::SolverFailure("gamble " + std::to_string(i + 1) + (b == Bound::Lower ? " (lower): " : " (upper): ") +
                                  e.what(),
                              e.state());
    }
    if (opt_.observer) opt_.observer(i, b, s);
  }

  void solve(Index i, Bound b) {
    NatexSession& s = session(i, b);
    do step(i, b);
    while (!s.converged());
  }

  // One iteration for every index in `ids`; the steps are independent, so
  // they may run on several workers.
  void step_all(const IndexSet& ids, Bound b) {
    const unsigned workers = std::min<unsigned>(opt_.threads, static_cast<unsigned>(ids.size()));
    if (workers <= 1) {
      for (Index i : ids) step(i, b);
      return;
    }
    std::vector<std::exception_ptr> errors(ids.size());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t n = w; n < ids.size(); n += workers) {
          try {
            step(ids[n], b);
          } catch (...) {
            errors[n] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  bool all_converged(const IndexSet& ids, Bound b) {
    return std::all_of(ids.begin(), ids.end(), [&](Index i) { return session(i, b).converged(); });
  }

  CriterionResult finish(IndexSet chosen) {
    std::sort(chosen.begin(), chosen.end());
    result_.chosen = std::move(chosen);
    std::sort(result_.maximin_set.begin(), result_.maximin_set.end());
    std::sort(result_.undecided.begin(), result_.undecided.end());
    result_.lower_iterations.assign(k(), 0);
    result_.upper_iterations.assign(k(), 0);
    result_.lower_values.assign(k(), std::nullopt);
    result_.upper_values.assign(k(), std::nullopt);
    for (Index i = 0; i < k(); ++i) {
      if (lower_[i]) {
        result_.lower_iterations[i] = lower_[i]->iterations();
        result_.lower_values[i] = lower_[i]->value();
      }
      if (upper_[i]) {
        result_.upper_iterations[i] = upper_[i]->iterations();
        result_.upper_values[i] = upper_[i]->value();
      }
    }
    return std::move(result_);
  }

 private:
  NatexEngine engine_;
  const GambleSet& K_;
  const CriterionOptions& opt_;
  std::vector<std::optional<NatexSession>> lower_;
  std::vector<std::optional<NatexSession>> upper_;
  CriterionResult result_;
};

struct Best {
  Index index = 0;
  double value = -kInf;
};

// Full cold solves; the lower variant keeps the largest lower bound, the
// upper variant the largest upper bound, both on strict improvement.
Best original_pass(Run& run, Bound b) {
  Best best;
  for (Index i = 0; i < run.k(); ++i) {
    run.open(i, b, false);
    run.solve(i, b);
    const NatexSession& s = run.session(i, b);
    const double v = b == Bound::Lower ? s.raw_lower() : s.raw_upper();
    if (v > best.value) best = {i, v};
  }
  return best;
}

Best sorted_pass(Run& run, Bound b, const IndexSet& order) {
  Best best;
  for (Index i : order) {
    NatexSession& s = run.open(i, b, true);
    do run.step(i, b);
    while (!(upper_of(s) < best.value || s.converged()));
    const double v = b == Bound::Lower ? lower_of(s) : upper_of(s);
    if (v > best.value) best = {i, v};
  }
  return best;
}

struct Elimination {
  IndexSet R;
  double m_lower = -kInf;
  double m_upper = kInf;
};

void refresh_bounds(Run& run, Bound b, const IndexSet& R, Elimination& el) {
  el.m_lower = -kInf;
  el.m_upper = -kInf;
  for (Index i : R) {
    el.m_lower = std::max(el.m_lower, lower_of(run.session(i, b)));
    el.m_upper = std::max(el.m_upper, upper_of(run.session(i, b)));
  }
}

IndexSet prune(Run& run, Bound b, const IndexSet& R, double threshold) {
  IndexSet kept;
  for (Index i : R) {
    if (upper_of(run.session(i, b)) >= threshold) kept.push_back(i);
  }
  return kept;
}

// Rounds stop at a single survivor or once M^* - M_* < epsilon. They also
// stop when every survivor has converged, since no later round could change
// anything.
Elimination eliminate(Run& run, Bound b) {
  Elimination el;
  el.R.resize(run.k());
  std::iota(el.R.begin(), el.R.end(), Index{0});
  for (Index i : el.R) run.open(i, b, true);
  do {
    run.step_all(el.R, b);
    refresh_bounds(run, b, el.R, el);
    el.R = prune(run, b, el.R, el.m_lower);
    ++run.result().rounds;
  } while (!(el.R.size() == 1 || el.m_upper - el.m_lower < run.epsilon() || run.all_converged(el.R, b)));
  return el;
}

// Classifies the undetermined set J against (M_*, M^*); returns the new J.
IndexSet classify(Run& run, const IndexSet& J, const Elimination& el, std::vector<bool>& in_I,
                  std::vector<bool>& in_N) {
  IndexSet still;
  for (Index j : J) {
    const NatexSession& s = run.session(j, Bound::Upper);
    if (lower_of(s) >= el.m_upper) {
      in_I[j] = true;
    } else if (upper_of(s) < el.m_lower) {
      in_N[j] = true;
    } else {
      still.push_back(j);
    }
  }
  return still;
}

IndexSet members(const std::vector<bool>& flags) {
  IndexSet out;
  for (Index i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.push_back(i);
  }
  return out;
}

CriterionResult single_answer(Run& run, const Best& best) {
  run.result().value = best.value;
  return run.finish({best.index});
}

CriterionResult elimination_answer(Run& run, const Elimination& el) {
  run.result().maximin_bounds = std::make_pair(el.m_lower, el.m_upper);
  return run.finish(el.R);
}

}  // namespace

std::string label(Algorithm a) { return kLabels[static_cast<int>(a)]; }

std::optional<Algorithm> parse_algorithm(const std::string& text) {
  for (Algorithm a : all_algorithms()) {
    if (label(a) == text) return a;
  }
  return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {Algorithm::Maximin1, Algorithm::Maximin2, Algorithm::Maximin3,
                                             Algorithm::Maximax1, Algorithm::Maximax2, Algorithm::Maximax3,
                                             Algorithm::Id1,      Algorithm::Id2,      Algorithm::Id3,
                                             Algorithm::Id4};
  return all;
}

CriterionKind kind_of(Algorithm a) {
  switch (a) {
    case Algorithm::Maximin1:
    case Algorithm::Maximin2:
    case Algorithm::Maximin3: return CriterionKind::Maximin;
    case Algorithm::Maximax1:
    case Algorithm::Maximax2:
    case Algorithm::Maximax3: return CriterionKind::Maximax;
    default: return CriterionKind::IntervalDominance;
  }
}

std::int64_t CriterionResult::total_iterations() const {
  std::int64_t total = setup_iterations;
  for (int n : lower_iterations) total += n;
  for (int n : upper_iterations) total += n;
  return total;
}

CriterionResult maximin_original(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Maximin1, P, K, opt);
  return single_answer(run, original_pass(run, Bound::Lower));
}

CriterionResult maximax_original(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Maximax1, P, K, opt);
  return single_answer(run, original_pass(run, Bound::Upper));
}

CriterionResult id_original(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Id1, P, K, opt);
  const Best best = original_pass(run, Bound::Lower);
  IndexSet I = {best.index};
  for (Index i = 0; i < run.k(); ++i) {
    if (i == best.index) continue;
    run.open(i, Bound::Upper, false);
    run.solve(i, Bound::Upper);
    if (run.session(i, Bound::Upper).raw_upper() >= best.value) I.push_back(i);
  }
  run.result().value = best.value;
  run.result().maximin_set = {best.index};
  return run.finish(std::move(I));
}

CriterionResult maximin_sorted(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Maximin2, P, K, opt);
  const IndexSet order = run.setup(true);
  return single_answer(run, sorted_pass(run, Bound::Lower, order));
}

CriterionResult maximax_sorted(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Maximax2, P, K, opt);
  const IndexSet order = run.setup(true);
  return single_answer(run, sorted_pass(run, Bound::Upper, order));
}

CriterionResult id_staged(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Id2, P, K, opt);
  const IndexSet order = run.setup(true);
  const Best best = sorted_pass(run, Bound::Lower, order);
  IndexSet I = {best.index};
  for (Index i : order) {
    if (i == best.index) continue;
    NatexSession& s = run.open(i, Bound::Upper, true);
    for (;;) {
      run.step(i, Bound::Upper);
      if (upper_of(s) < best.value) break;
      if (lower_of(s) >= best.value || s.converged()) {
        I.push_back(i);
        break;
      }
    }
  }
  run.result().value = best.value;
  run.result().maximin_set = {best.index};
  return run.finish(std::move(I));
}

CriterionResult maximin_elimination(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Maximin3, P, K, opt);
  run.setup(false);
  return elimination_answer(run, eliminate(run, Bound::Lower));
}

CriterionResult maximax_elimination(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Maximax3, P, K, opt);
  run.setup(false);
  return elimination_answer(run, eliminate(run, Bound::Upper));
}

CriterionResult id_interleaved(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Id3, P, K, opt);
  run.setup(false);
  const double eps = run.epsilon();
  Elimination el;
  el.R.resize(run.k());
  std::iota(el.R.begin(), el.R.end(), Index{0});
  IndexSet J = el.R;
  std::vector<bool> in_I(run.k(), false);
  std::vector<bool> in_N(run.k(), false);
  for (Index i : el.R) {
    run.open(i, Bound::Lower, true);
    run.open(i, Bound::Upper, true);
  }
  for (;;) {
    if (el.m_upper - el.m_lower >= eps) {
      run.step_all(el.R, Bound::Lower);
      refresh_bounds(run, Bound::Lower, el.R, el);
      el.R = prune(run, Bound::Lower, el.R, el.m_lower);
    }
    run.step_all(J, Bound::Upper);
    J = classify(run, J, el, in_I, in_N);
    ++run.result().rounds;
    if (J.empty()) break;
    const bool uppers_done = run.all_converged(J, Bound::Upper);
    if (uppers_done && el.m_upper - el.m_lower < eps) break;
    if (uppers_done && run.all_converged(el.R, Bound::Lower)) break;
  }
  for (Index j : J) in_I[j] = true;
  run.result().undecided = J;
  run.result().maximin_set = el.R;
  run.result().maximin_bounds = std::make_pair(el.m_lower, el.m_upper);
  return run.finish(members(in_I));
}

CriterionResult id_hybrid(const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  Run run(Algorithm::Id4, P, K, opt);
  run.setup(false);
  const double eps = run.epsilon();
  Elimination el = eliminate(run, Bound::Lower);

  std::vector<bool> in_I(run.k(), false);
  std::vector<bool> in_N(run.k(), false);
  for (Index r : el.R) in_I[r] = true;
  IndexSet J;
  for (Index j = 0; j < run.k(); ++j) {
    if (!in_I[j]) J.push_back(j);
  }
  for (Index j : J) run.open(j, Bound::Upper, true);
  while (!J.empty()) {
    run.step_all(J, Bound::Upper);
    if (el.m_upper - el.m_lower >= eps) {
      run.step_all(el.R, Bound::Lower);
      refresh_bounds(run, Bound::Lower, el.R, el);
    }
    J = classify(run, J, el, in_I, in_N);
    ++run.result().rounds;
    if (J.empty()) break;
    const bool uppers_done = run.all_converged(J, Bound::Upper);
    if (uppers_done && el.m_upper - el.m_lower < eps) break;
    if (uppers_done && run.all_converged(el.R, Bound::Lower)) break;
  }
  for (Index j : J) in_I[j] = true;
  run.result().undecided = J;
  run.result().maximin_set = el.R;
  run.result().maximin_bounds = std::make_pair(el.m_lower, el.m_upper);
  return run.finish(members(in_I));
}

CriterionResult run_algorithm(Algorithm a, const LowerPrevision& P, const GambleSet& K,
                              const CriterionOptions& opt) {
  switch (a) {
    case Algorithm::Maximin1: return maximin_original(P, K, opt);
    case Algorithm::Maximin2: return maximin_sorted(P, K, opt);
    case Algorithm::Maximin3: return maximin_elimination(P, K, opt);
    case Algorithm::Maximax1: return maximax_original(P, K, opt);
    case Algorithm::Maximax2: return maximax_sorted(P, K, opt);
    case Algorithm::Maximax3: return maximax_elimination(P, K, opt);
    case Algorithm::Id1: return id_original(P, K, opt);
    case Algorithm::Id2: return id_staged(P, K, opt);
    case Algorithm::Id3: return id_interleaved(P, K, opt);
    case Algorithm::Id4: return id_hybrid(P, K, opt);
  }
  throw ContractViolation("unknown algorithm");
}

}  // namespace credal
