#include "credal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace credal::bench {

namespace {

using Task = std::function<std::vector<BenchmarkRecord>()>;

std::vector<BenchmarkRecord> run_tasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<std::vector<BenchmarkRecord>> out(tasks.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) out[t] = tasks[t]();
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  std::vector<BenchmarkRecord> records;
  for (auto& chunk : out) records.insert(records.end(), chunk.begin(), chunk.end());
  return records;
}

std::vector<BenchmarkRecord> run_instance(const std::string& id, const std::string& option, const LowerPrevision& P,
                                          const GambleSet& K, const RunConfig& config) {
  std::vector<BenchmarkRecord> rows;
  for (Algorithm a : config.algorithms) {
    BenchmarkRecord rec = run_one(a, P, K, config.criterion);
    rec.instance_id = id;
    rec.option = option;
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<BenchmarkRecord> failed_instance(const std::string& id, const std::string& option, const GridCell& cell,
                                             const RunConfig& config) {
  std::vector<BenchmarkRecord> rows;
  for (Algorithm a : config.algorithms) {
    BenchmarkRecord rec;
    rec.instance_id = id;
    rec.algorithm = label(a);
    rec.n_omega = cell.n_omega;
    rec.dom_size = cell.dom_size;
    rec.k = cell.k;
    rec.option = option;
    rec.result_digest = "failed";
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, sep);) fields.push_back(f);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

struct Stats {
  double mean = 0.0;
  double ci95 = std::numeric_limits<double>::quiet_NaN();
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  const double n = static_cast<double>(v.size());
  for (double x : v) s.mean += x;
  s.mean /= n;
  if (v.size() >= 10) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

void write_number(std::ostream& out, double x) {
  if (std::isnan(x)) return;
  std::ostringstream ss;
  ss.precision(10);
  ss << x;
  out << ss.str();
}

}  // namespace

std::vector<GridCell> named_grid(const std::string& name) {
  if (name == "small") return {{4, 16, 4}, {4, 16, 16}, {16, 16, 4}, {16, 16, 16}};
  if (name == "medium") {
    return {{16, 16, 16}, {16, 16, 64}, {64, 16, 16}, {64, 16, 64},
            {16, 64, 16}, {16, 64, 64}, {64, 64, 16}, {64, 64, 64}};
  }
  throw ContractViolation("unknown grid '" + name + "', expected small or medium");
}

std::string result_digest(const std::vector<std::size_t>& chosen) {
  std::vector<std::size_t> sorted = chosen;
  std::sort(sorted.begin(), sorted.end());
  std::string text;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) text += ',';
    text += std::to_string(sorted[i] + 1);
  }
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BenchmarkRecord run_one(Algorithm a, const LowerPrevision& P, const GambleSet& K, const CriterionOptions& opt) {
  BenchmarkRecord rec;
  rec.algorithm = label(a);
  rec.n_omega = P.space().size();
  rec.dom_size = P.domain_size();
  rec.k = K.size();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CriterionResult res = run_algorithm(a, P, K, opt);
    rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
    rec.setup_ns = res.setup_ns;
    rec.cum_ipm_iterations = res.total_iterations();
    rec.lp_count = res.lp_sessions;
    rec.result_digest = result_digest(res.chosen);
  } catch (const std::exception&) {
    rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
    rec.result_digest = "failed";
  }
  return rec;
}

std::vector<BenchmarkRecord> run_grid(const std::vector<GridCell>& grid, int repetitions, std::uint64_t seed,
                                      const RunConfig& config) {
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const GridCell cell = grid[c];
    if (cell.n_omega == 0 || cell.dom_size == 0 || cell.k == 0) throw ContractViolation("grid sizes must be positive");
    for (int r = 0; r < repetitions; ++r) {
      tasks.push_back([=, &config] {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.instance = (static_cast<std::uint64_t>(c) << 32) | static_cast<std::uint64_t>(r);
        cfg.n_omega = cell.n_omega;
        cfg.dom_size = cell.dom_size;
        cfg.k = cell.k;
        const std::string id = "c" + std::to_string(c) + "r" + std::to_string(r);
        try {
          const LowerPrevision P = gen_lower_prevision(cfg);
          const GambleSet K = gen_gamble_set(cfg);
          return run_instance(id, "-", P, K, config);
        } catch (const std::exception&) {
          return failed_instance(id, "-", cell, config);
        }
      });
    }
  }
  return run_tasks(tasks, config.jobs);
}

std::vector<BenchmarkRecord> run_options(std::size_t k, const std::vector<char>& options, int repetitions,
                                         std::uint64_t seed, std::size_t n_omega, std::size_t dom_size,
                                         const RunConfig& config) {
  for (char o : options) option_counts(k, o);  // validates every label up front
  std::vector<Task> tasks;
  for (char o : options) {
    for (int r = 0; r < repetitions; ++r) {
      tasks.push_back([=, &config] {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.instance = (static_cast<std::uint64_t>(o - 'a') << 32) | static_cast<std::uint64_t>(r);
        cfg.n_omega = n_omega;
        cfg.dom_size = dom_size;
        cfg.k = k;
        cfg.option = o;
        const std::string id = std::string(1, o) + "r" + std::to_string(r);
        try {
          const LowerPrevision P = gen_lower_prevision(cfg);
          const GambleSet K = gen_controlled_set(cfg, P);
          return run_instance(id, std::string(1, o), P, K, config);
        } catch (const std::exception&) {
          return failed_instance(id, std::string(1, o), {n_omega, dom_size, k}, config);
        }
      });
    }
  }
  return run_tasks(tasks, config.jobs);
}

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.instance_id << ',' << r.algorithm << ',' << r.n_omega << ',' << r.dom_size << ',' << r.k << ','
        << r.option << ',' << r.wall_ns << ',' << r.setup_ns << ',' << r.cum_ipm_iterations << ',' << r.lp_count
        << ',' << r.result_digest << '\n';
  }
}

std::vector<BenchmarkRecord> read_csv(std::istream& in) {
  std::vector<BenchmarkRecord> records;
  std::string line;
  if (!std::getline(in, line)) return records;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParseError(1, "unexpected benchmark header");
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) throw ParseError(number, "expected 11 fields, got " + std::to_string(f.size()));
    BenchmarkRecord r;
    try {
      r.instance_id = f[0];
      r.algorithm = f[1];
      r.n_omega = std::stoull(f[2]);
      r.dom_size = std::stoull(f[3]);
      r.k = std::stoull(f[4]);
      r.option = f[5];
      r.wall_ns = std::stoll(f[6]);
      r.setup_ns = std::stoll(f[7]);
      r.cum_ipm_iterations = std::stoll(f[8]);
      r.lp_count = std::stoi(f[9]);
      r.result_digest = f[10];
    } catch (const std::logic_error&) {
      throw ParseError(number, "malformed numeric field");
    }
    records.push_back(std::move(r));
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<Summary> summarize(const std::vector<BenchmarkRecord>& records) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::string, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<Key> keys;
  std::vector<std::vector<const BenchmarkRecord*>> groups;
  for (const auto& r : records) {
    if (r.result_digest == "failed") continue;
    Key key{r.n_omega, r.dom_size, r.k, r.option, r.algorithm};
    auto [it, fresh] = slot.emplace(key, groups.size());
    if (fresh) {
      keys.push_back(key);
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  std::vector<Summary> rows;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Summary s;
    std::tie(s.n_omega, s.dom_size, s.k, s.option, s.algorithm) = keys[g];
    std::vector<double> wall, iters;
    for (const auto* r : groups[g]) {
      wall.push_back(static_cast<double>(r->wall_ns));
      iters.push_back(static_cast<double>(r->cum_ipm_iterations));
    }
    s.n_runs = wall.size();
    const Stats st = stats(wall);
    s.mean_wall_ns = st.mean;
    s.ci95_wall_ns = st.ci95;
    s.median_wall_ns = median(wall);
    s.median_iterations = median(iters);
    rows.push_back(std::move(s));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<Summary>& rows) {
  out << "n_omega,dom_size,k,option,algorithm,n_runs,median_wall_ns,mean_wall_ns,ci95_wall_ns,"
         "median_cum_ipm_iterations\n";
  for (const auto& s : rows) {
    out << s.n_omega << ',' << s.dom_size << ',' << s.k << ',' << s.option << ',' << s.algorithm << ',' << s.n_runs
        << ',';
    write_number(out, s.median_wall_ns);
    out << ',';
    write_number(out, s.mean_wall_ns);
    out << ',';
    write_number(out, s.ci95_wall_ns);
    out << ',';
    write_number(out, s.median_iterations);
    out << '\n';
  }
}

void emit_plot_data(std::ostream& out, const std::vector<BenchmarkRecord>& records, const std::string& axis) {
  std::function<std::string(const BenchmarkRecord&)> x_of;
  if (axis == "n_omega") {
    x_of = [](const BenchmarkRecord& r) { return std::to_string(r.n_omega); };
  } else if (axis == "dom_size") {
    x_of = [](const BenchmarkRecord& r) { return std::to_string(r.dom_size); };
  } else if (axis == "k") {
    x_of = [](const BenchmarkRecord& r) { return std::to_string(r.k); };
  } else if (axis == "option") {
    x_of = [](const BenchmarkRecord& r) { return r.option; };
  } else {
    throw ContractViolation("unknown plot axis '" + axis + "', expected n_omega, dom_size, k or option");
  }

  std::vector<std::string> series;
  std::map<std::string, std::vector<std::string>> xs;
  std::map<std::pair<std::string, std::string>, std::vector<double>> wall;
  for (const auto& r : records) {
    if (r.result_digest == "failed") continue;
    const std::string x = x_of(r);
    if (!xs.count(r.algorithm)) series.push_back(r.algorithm);
    auto& seen = xs[r.algorithm];
    if (std::find(seen.begin(), seen.end(), x) == seen.end()) seen.push_back(x);
    wall[{r.algorithm, x}].push_back(static_cast<double>(r.wall_ns));
  }
  out << "series," << axis << ",mean_wall_ns,ci95_wall_ns,n_runs\n";
  for (const auto& name : series) {
    for (const auto& x : xs[name]) {
      const auto& v = wall[{name, x}];
      const Stats st = stats(v);
      out << name << ',' << x << ',';
      write_number(out, st.mean);
      out << ',';
      write_number(out, st.ci95);
      out << ',' << v.size() << '\n';
    }
  }
}

}  // namespace credal::bench
