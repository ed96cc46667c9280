// credal: generate instances, run the decision algorithms, verify answers
// against the simplex oracle and run benchmark sweeps.
//
// Exit codes: 0 ok, 1 verification failure, 2 argument or input error,
// 3 solver or generation failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "credal/bench.hpp"
#include "credal/criteria.hpp"
#include "credal/generators.hpp"
#include "credal/instance_io.hpp"
#include "credal/oracle.hpp"

using namespace credal;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kSolverFailed = 3 };

struct VerifyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> algorithm_labels() {
  std::vector<std::string> labels;
  for (Algorithm a : all_algorithms()) labels.push_back(label(a));
  return labels;
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& labels) {
  std::vector<Algorithm> out;
  for (const auto& l : labels) out.push_back(*parse_algorithm(l));
  return out;
}

std::string format_set(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

std::string format_list(const std::vector<std::size_t>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ";" : "") + std::to_string(s[i] + 1);
  return out;
}

std::string format_double(double x) {
  std::ostringstream ss;
  ss.precision(12);
  ss << x;
  return ss.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  return out;
}

// Runs `body` with the output stream named by `path`, or stdout for "" / "-".
template <class F>
void with_output(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
  } else {
    std::ofstream out = open_output(path);
    body(out);
  }
}

struct SolverFlags {
  double epsilon = 1e-8;
  std::string orientation = "auto";
  unsigned threads = 1;

  void add(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "Solver tolerance on max(gap, primal residual, dual residual)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--orientation", orientation, "LP member handed to the solver")
        ->check(CLI::IsMember({"auto", "credal", "multiplier"}))
        ->capture_default_str();
    cmd->add_option("--threads", threads, "Workers per elimination round")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
  }

  CriterionOptions options() const {
    CriterionOptions opt;
    opt.solver.epsilon = epsilon;
    opt.orientation = orientation == "credal"       ? Orientation::Credal
                      : orientation == "multiplier" ? Orientation::Multiplier
                                                    : Orientation::Auto;
    opt.threads = threads;
    return opt;
  }
};

// ---- gen ----

struct GenFlags {
  std::size_t omega = 4;
  std::size_t dom = 4;
  std::size_t k = 4;
  std::uint64_t seed = 0;
  std::uint64_t instance = 0;
  std::size_t s_coherent = 16;
  std::string option;
  double margin = 1e-3;
  std::string output;
};

int cmd_gen(const GenFlags& f) {
  GenConfig cfg;
  cfg.seed = f.seed;
  cfg.instance = f.instance;
  cfg.n_omega = f.omega;
  cfg.dom_size = f.dom;
  cfg.k = f.k;
  cfg.s_coherent = f.s_coherent;
  cfg.margin = f.margin;
  if (!f.option.empty()) cfg.option = f.option[0];
  cfg.validate();

  LowerPrevision P = gen_lower_prevision(cfg);
  GambleSet K = cfg.option ? gen_controlled_set(cfg, P) : gen_gamble_set(cfg);
  const Instance inst{std::move(P), std::move(K)};
  if (cfg.option) {
    const auto sets = oracle::oracle_opt_sets(inst.prevision, inst.gambles);
    std::cerr << "option " << *cfg.option << ": maximin " << sets.maximin.size() << ", interval dominant "
              << sets.interval_dominant.size() << '\n';
  }
  with_output(f.output, [&](std::ostream& out) { write_instance(out, inst); });
  return kOk;
}

// ---- solve ----

struct SolveFlags {
  std::string input;
  std::vector<std::string> algorithms;
  std::string results;
  SolverFlags solver;
};

void print_result(std::ostream& out, const CriterionResult& r) {
  out << "algorithm " << label(r.algorithm) << '\n';
  switch (r.kind) {
    case CriterionKind::Maximin:
    case CriterionKind::Maximax: {
      const bool single = r.algorithm != Algorithm::Maximin3 && r.algorithm != Algorithm::Maximax3;
      out << (single ? "i* = " : "R = ") << format_set(r.chosen) << '\n';
      break;
    }
    case CriterionKind::IntervalDominance:
      out << "I = " << format_set(r.chosen) << '\n';
      if (!r.maximin_set.empty()) {
        const bool single = r.algorithm == Algorithm::Id1 || r.algorithm == Algorithm::Id2;
        out << (single ? "i* = " : "R = ") << format_set(r.maximin_set) << '\n';
      }
      if (!r.undecided.empty()) out << "included at tolerance " << format_set(r.undecided) << '\n';
      break;
  }
  if (r.value) out << "value " << format_double(*r.value) << '\n';
  if (r.maximin_bounds) {
    out << "maximin bounds [" << format_double(r.maximin_bounds->first) << ", "
        << format_double(r.maximin_bounds->second) << "]\n";
  }
  out << "iterations " << r.total_iterations() << " (setup " << r.setup_iterations << ")\n";
  out << "lp sessions " << r.lp_sessions << '\n';
}

int cmd_solve(const SolveFlags& f) {
  const Instance inst = read_instance_file(f.input);
  const auto algorithms = f.algorithms.empty() ? all_algorithms() : parse_algorithms(f.algorithms);
  const CriterionOptions opt = f.solver.options();
  std::vector<CriterionResult> results;
  for (std::size_t n = 0; n < algorithms.size(); ++n) {
    results.push_back(run_algorithm(algorithms[n], inst.prevision, inst.gambles, opt));
    if (n) std::cout << '\n';
    print_result(std::cout, results.back());
  }
  if (!f.results.empty()) {
    with_output(f.results, [&](std::ostream& out) {
      out << "algorithm,chosen,result_digest\n";
      for (const auto& r : results) {
        out << label(r.algorithm) << ',' << format_list(r.chosen) << ',' << bench::result_digest(r.chosen) << '\n';
      }
    });
  }
  return kOk;
}

// ---- verify ----

struct VerifyFlags {
  std::string input;
  std::string results;
  double tol = oracle::kOracleTolerance;
  SolverFlags solver;
};

struct ResultRow {
  std::size_t line;
  Algorithm algorithm;
  std::vector<std::size_t> chosen;
  std::string digest;
};

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (number == 1 && line.rfind("algorithm,", 0) == 0)) continue;
    std::stringstream ss(line);
    std::string alg, chosen, digest;
    std::getline(ss, alg, ',');
    std::getline(ss, chosen, ',');
    std::getline(ss, digest, ',');
    const auto a = parse_algorithm(alg);
    if (!a) throw ParseError(number, "unknown algorithm '" + alg + "'");
    ResultRow row{number, *a, {}, digest};
    std::stringstream cs(chosen);
    for (std::string item; std::getline(cs, item, ';');) {
      try {
        const long v = std::stol(item);
        if (v < 1) throw std::out_of_range("index");
        row.chosen.push_back(static_cast<std::size_t>(v - 1));
      } catch (const std::logic_error&) {
        throw ParseError(number, "bad index '" + item + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_verify(const VerifyFlags& f) {
  const Instance inst = read_instance_file(f.input);
  const auto sets = oracle::oracle_opt_sets(inst.prevision, inst.gambles, f.tol);
  std::vector<ResultRow> rows;
  if (f.results.empty()) {
    const CriterionOptions opt = f.solver.options();
    for (Algorithm a : all_algorithms()) {
      const auto r = run_algorithm(a, inst.prevision, inst.gambles, opt);
      rows.push_back({0, a, r.chosen, bench::result_digest(r.chosen)});
    }
  } else {
    rows = read_results(f.results);
  }
  for (const auto& row : rows) {
    const std::string where = row.line ? "line " + std::to_string(row.line) + " (" + label(row.algorithm) + ")"
                                       : label(row.algorithm);
    if (row.digest != bench::result_digest(row.chosen)) {
      throw VerifyFailure(where + ": digest " + row.digest + " does not match chosen set " + format_set(row.chosen));
    }
    const std::string problem = oracle::check_chosen(kind_of(row.algorithm), row.chosen, sets, f.tol);
    if (!problem.empty()) throw VerifyFailure(where + ": " + problem);
  }
  std::cout << "verified " << rows.size() << " result" << (rows.size() == 1 ? "" : "s") << " against the oracle\n";
  std::cout << "oracle maximin " << format_set(sets.maximin) << ", maximax " << format_set(sets.maximax)
            << ", interval dominant " << format_set(sets.interval_dominant) << '\n';
  return kOk;
}

// ---- bench / summarize ----

struct BenchFlags {
  std::string grid = "small";
  std::vector<std::size_t> omega, dom, k;
  std::string options;
  int reps = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> algorithms;
  unsigned jobs = 1;
  std::string output;
  std::string summary;
  std::string plot;
  std::string axis = "k";
  SolverFlags solver;
};

void write_reports(const std::vector<bench::BenchmarkRecord>& records, const std::string& summary,
                   const std::string& plot, const std::string& axis) {
  if (!summary.empty()) {
    with_output(summary, [&](std::ostream& out) { bench::write_summary_csv(out, bench::summarize(records)); });
  }
  if (!plot.empty()) {
    with_output(plot, [&](std::ostream& out) { bench::emit_plot_data(out, records, axis); });
  }
}

int cmd_bench(const BenchFlags& f) {
  bench::RunConfig config;
  config.criterion = f.solver.options();
  config.jobs = f.jobs;
  std::vector<bench::BenchmarkRecord> records;

  if (!f.options.empty()) {
    if (f.k.size() > 1 || f.omega.size() > 1 || f.dom.size() > 1) {
      throw ContractViolation("an option sweep takes a single --omega, --dom and --k");
    }
    config.algorithms = f.algorithms.empty()
                            ? std::vector<Algorithm>{Algorithm::Id1, Algorithm::Id2, Algorithm::Id3, Algorithm::Id4}
                            : parse_algorithms(f.algorithms);
    const std::size_t k = f.k.empty() ? 16 : f.k[0];
    const std::size_t omega = f.omega.empty() ? 16 : f.omega[0];
    const std::size_t dom = f.dom.empty() ? 16 : f.dom[0];
    const std::vector<char> opts(f.options.begin(), f.options.end());
    records = bench::run_options(k, opts, f.reps, f.seed, omega, dom, config);
  } else {
    if (!f.algorithms.empty()) config.algorithms = parse_algorithms(f.algorithms);
    std::vector<bench::GridCell> grid;
    if (f.omega.empty() && f.dom.empty() && f.k.empty()) {
      grid = bench::named_grid(f.grid);
    } else {
      // Cartesian product of the given sizes; a missing axis defaults to 16.
      const std::vector<std::size_t> def{16};
      for (std::size_t o : f.omega.empty() ? def : f.omega)
        for (std::size_t d : f.dom.empty() ? def : f.dom)
          for (std::size_t kk : f.k.empty() ? def : f.k) grid.push_back({o, d, kk});
    }
    records = bench::run_grid(grid, f.reps, f.seed, config);
  }

  with_output(f.output, [&](std::ostream& out) { bench::write_csv(out, records); });
  write_reports(records, f.summary, f.plot, f.axis);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.result_digest == "failed";
  if (failed) {
    std::cerr << failed << " of " << records.size() << " runs failed\n";
    return kSolverFailed;
  }
  return kOk;
}

struct SummarizeFlags {
  std::string input;
  std::string output;
  std::string plot;
  std::string axis = "k";
};

int cmd_summarize(const SummarizeFlags& f) {
  std::ifstream in(f.input);
  if (!in) throw std::ios_base::failure("cannot read " + f.input);
  const auto records = bench::read_csv(in);
  with_output(f.output, [&](std::ostream& out) { bench::write_summary_csv(out, bench::summarize(records)); });
  if (!f.plot.empty()) write_reports(records, "", f.plot, f.axis);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision making with lower previsions: natural extensions, Gamma-maximin, Gamma-maximax and "
               "interval dominance"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  const auto labels = algorithm_labels();
  std::string labels_text;
  for (const auto& l : labels) labels_text += (labels_text.empty() ? "" : "|") + l;

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--omega", gen.omega, "Number of outcomes")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--dom", gen.dom, "Gambles in the domain of the lower prevision")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--k", gen.k, "Gambles in the decision set")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed (falls back to CREDAL_SEED)")
      ->envname("CREDAL_SEED")
      ->capture_default_str();
  gen_cmd->add_option("--instance", gen.instance, "Substream index under the seed")->capture_default_str();
  gen_cmd->add_option("--s-coherent", gen.s_coherent, "Pmfs in the lower envelope")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--option", gen.option, "Controlled decision set, option a..j")
      ->check(CLI::IsMember({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"}));
  gen_cmd->add_option("--margin", gen.margin, "Separation of controlled decisions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Instance file (stdout when omitted)");

  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run decision algorithms on an instance file");
  solve_cmd->add_option("instance", solve.input, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("-a,--algorithm", solve.algorithms, "Algorithms to run (" + labels_text + "); default all")
      ->check(CLI::IsMember(labels));
  solve_cmd->add_option("-r,--results", solve.results, "Write algorithm,chosen,result_digest rows here");
  solve.solver.add(solve_cmd);

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Check results against the simplex oracle; without a results file every algorithm is run and checked");
  verify_cmd->add_option("instance", verify.input, "Instance file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("results", verify.results, "Results file written by solve --results")
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("--tol", verify.tol, "Decision-side tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify.solver.add(verify_cmd);

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark sweep over a size grid or a set of options");
  bench_cmd->add_option("--grid", bench_flags.grid, "Named grid when no sizes are given")
      ->check(CLI::IsMember({"small", "medium"}))
      ->capture_default_str();
  bench_cmd->add_option("--omega", bench_flags.omega, "Outcome counts (crossed with --dom and --k)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--dom", bench_flags.dom, "Domain sizes")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--k", bench_flags.k, "Decision set sizes")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--options", bench_flags.options, "Option sweep, e.g. abcdefghij (controlled sets)");
  bench_cmd->add_option("--reps", bench_flags.reps, "Repetitions per cell or option")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_flags.seed, "Random seed (falls back to CREDAL_SEED)")
      ->envname("CREDAL_SEED")
      ->capture_default_str();
  bench_cmd->add_option("-a,--algorithm", bench_flags.algorithms, "Algorithms to run (" + labels_text + ")")
      ->check(CLI::IsMember(labels));
  bench_cmd->add_option("-j,--jobs", bench_flags.jobs, "Instances processed concurrently")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  bench_cmd->add_option("-o,--output", bench_flags.output, "Record CSV (stdout when omitted)");
  bench_cmd->add_option("--summary", bench_flags.summary, "Summary CSV");
  bench_cmd->add_option("--plot", bench_flags.plot, "Plot-ready CSV");
  bench_cmd->add_option("--axis", bench_flags.axis, "x axis of the plot data")
      ->check(CLI::IsMember({"n_omega", "dom_size", "k", "option"}))
      ->capture_default_str();
  bench_flags.solver.add(bench_cmd);

  SummarizeFlags summarize;
  auto* summarize_cmd = app.add_subcommand("summarize", "Summaries and plot data from a record CSV");
  summarize_cmd->add_option("records", summarize.input, "Record CSV")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("-o,--output", summarize.output, "Summary CSV (stdout when omitted)");
  summarize_cmd->add_option("--plot", summarize.plot, "Plot-ready CSV");
  summarize_cmd->add_option("--axis", summarize.axis, "x axis of the plot data")
      ->check(CLI::IsMember({"n_omega", "dom_size", "k", "option"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) return cmd_solve(solve);
    if (*verify_cmd) return cmd_verify(verify);
    if (*bench_cmd) return cmd_bench(bench_flags);
    if (*summarize_cmd) return cmd_summarize(summarize);
  } catch (const VerifyFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kSolverFailed;
  }
  return kOk;
}
