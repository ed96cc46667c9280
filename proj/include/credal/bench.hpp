#pragma once

// Benchmark harness: size grids and option sweeps, one record per
// (instance, algorithm) run, CSV input/output and summaries.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "credal/criteria.hpp"
#include "credal/generators.hpp"

namespace credal::bench {

struct BenchmarkRecord {
  std::string instance_id;
  std::string algorithm;
  std::size_t n_omega = 0;
  std::size_t dom_size = 0;
  std::size_t k = 0;
  std::string option = "-";
  std::int64_t wall_ns = 0;
  std::int64_t setup_ns = 0;
  std::int64_t cum_ipm_iterations = 0;
  int lp_count = 0;
  std::string result_digest;  // "failed" when the run threw
};

inline constexpr const char* kCsvHeader =
    "instance_id,algorithm,n_omega,dom_size,k,option,wall_ns,setup_ns,cum_ipm_iterations,lp_count,result_digest";

struct GridCell {
  std::size_t n_omega;
  std::size_t dom_size;
  std::size_t k;
};

struct RunConfig {
  std::vector<Algorithm> algorithms = all_algorithms();
  CriterionOptions criterion;
  unsigned jobs = 1;  // instances processed concurrently
};

/// "small" (4 cells) and "medium" (8 cells); throws ContractViolation for
/// other names.
std::vector<GridCell> named_grid(const std::string& name);

/// 16 hex digits of the FNV-1a hash of the sorted 1-based index list.
std::string result_digest(const std::vector<std::size_t>& chosen);

/// Every algorithm on the same generated instance, for every cell and
/// repetition. Instance ids are "c<cell>r<rep>".
std::vector<BenchmarkRecord> run_grid(const std::vector<GridCell>& grid, int repetitions, std::uint64_t seed,
                                      const RunConfig& config = {});

/// Controlled gamble sets (one per option and repetition) on a shared size.
/// Instance ids are "<option>r<rep>".
std::vector<BenchmarkRecord> run_options(std::size_t k, const std::vector<char>& options, int repetitions,
                                         std::uint64_t seed, std::size_t n_omega, std::size_t dom_size,
                                         const RunConfig& config);

/// Runs one algorithm and fills a record (timing included).
BenchmarkRecord run_one(Algorithm a, const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt);

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_csv(std::istream& in);

struct Summary {
  std::size_t n_omega = 0;
  std::size_t dom_size = 0;
  std::size_t k = 0;
  std::string option;
  std::string algorithm;
  std::size_t n_runs = 0;
  double median_wall_ns = 0.0;
  double mean_wall_ns = 0.0;
  double ci95_wall_ns = 0.0;  // NaN when n_runs < 10
  double median_iterations = 0.0;
};

double median(std::vector<double> values);

/// One row per (sizes, option, algorithm), in order of first appearance.
/// Failed runs are skipped.
std::vector<Summary> summarize(const std::vector<BenchmarkRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<Summary>& rows);

/// Plot-ready CSV: series = algorithm, x = `axis` (n_omega, dom_size, k or
/// option), y = mean wall time with its confidence half-width.
void emit_plot_data(std::ostream& out, const std::vector<BenchmarkRecord>& records, const std::string& axis);

}  // namespace credal::bench
