#pragma once

// Accuracy and relative running time of the walk solvers over datasets of
// satisfiable formulas.
//
// The accuracy of a parameter setting (MF, MT) is estimated as the fraction
// of dataset runs that find a model. Its cost is the arithmetic mean of
// total flips over all runs, failures included at their full MT * MF. The
// relative running time t^a is the least mean cost over the grid cells
// whose accuracy is at least a.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gsat/dataset.hpp"
#include "gsat/local_search.hpp"
#include "gsat/parallel.hpp"
#include "gsat/rng.hpp"

namespace gsat {

struct GridSpec {
  std::vector<std::uint64_t> mf_values;
  std::vector<std::uint64_t> mt_values;
  double noise = 0.5;
  Strategy strategy = Strategy::skc_walk;
  std::uint64_t seed = 0;
  unsigned repetitions = 1;
  bool record_time = true;  // false writes 0 for mean_time, making output reproducible

  void validate() const {
    auto check = [](const std::vector<std::uint64_t> &values, const char *name) {
      if (values.empty()) throw ContractViolation(std::string(name) + " list is empty");
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0) throw ContractViolation(std::string(name) + " values must be positive");
        if (i && values[i] <= values[i - 1])
          throw ContractViolation(std::string(name) + " values must be strictly ascending");
      }
    };
    check(mf_values, "MF");
    check(mt_values, "MT");
    if (repetitions < 1) throw ContractViolation("repetitions must be at least 1");
    if (!(noise >= 0.0 && noise <= 1.0)) throw ContractViolation("noise must lie in [0, 1]");
  }
};

struct CellResult {
  std::uint64_t mf = 0;
  std::uint64_t mt = 0;
  std::size_t n = 0;       // runs
  std::size_t solved = 0;
  double accuracy = 0.0;
  double mean_flips = 0.0;
  double mean_time = 0.0;  // seconds

  friend bool operator==(const CellResult &, const CellResult &) = default;
};

struct AccuracyTable {
  std::string dataset;
  std::vector<CellResult> cells;  // MF-major: all MT values for the first MF, ...

  const CellResult *find(std::uint64_t mf, std::uint64_t mt) const {
    for (const auto &c : cells)
      if (c.mf == mf && c.mt == mt) return &c;
    return nullptr;
  }
};

struct RelativeRuntime {
  double target = 0.0;
  double t_a_flips = 0.0;   // mean flips of the argmin cell
  double t_a_time = 0.0;    // least mean time among qualifying cells
  std::uint64_t mf = 0;     // argmin cell by flips
  std::uint64_t mt = 0;
  double achieved_accuracy = 0.0;
};

struct AccuracyEstimate {
  double accuracy = 0.0;
  std::vector<SearchOutcome> outcomes;  // instance-major, then repetition
};

// Seed for repetition `rep` of instance `instance` at the cell (mf, mt).
inline std::uint64_t run_seed(std::uint64_t base, std::uint64_t mf, std::uint64_t mt,
                              std::uint64_t instance, std::uint64_t rep = 0) {
  return derive_seed(base, {mf, mt, instance, rep});
}

inline std::string dataset_identity(const Dataset &ds) {
  const DatasetSpec &s = ds.spec;
  std::string id = std::string(to_string(s.family));
  if (s.family == Family::random3cnf)
    id += " n=" + std::to_string(s.size) + " ratio=" + format_double(s.ratio);
  else
    id += " p=" + std::to_string(s.size) + " k=" + std::to_string(s.colors);
  id += " filter=" + std::string(to_string(s.filter)) + " count=" + std::to_string(ds.size()) +
        " seed=" + std::to_string(s.master_seed);
  return id;
}

namespace detail {

inline void require_certified(const Dataset &ds) {
  if (!ds.certified())
    throw ContractViolation("dataset is not certified satisfiable; accuracy is undefined");
}

inline std::vector<OccurrenceIndex> index_all(const Dataset &ds, unsigned jobs) {
  std::vector<OccurrenceIndex> indices(ds.size());
  parallel_for(ds.size(), jobs, [&](std::size_t i) { indices[i] = OccurrenceIndex(ds.instances[i].formula); });
  return indices;
}

}  // namespace detail

inline AccuracyEstimate estimate_accuracy(const Dataset &ds, const SearchParams &params,
                                          unsigned repetitions = 1, unsigned jobs = 1) {
  detail::require_certified(ds);
  params.validate();
  if (repetitions < 1) throw ContractViolation("repetitions must be at least 1");
  const auto indices = detail::index_all(ds, jobs);
  AccuracyEstimate est;
  est.outcomes.resize(ds.size() * repetitions);
  parallel_for(est.outcomes.size(), jobs, [&](std::size_t k) {
    const std::size_t i = k / repetitions;
    SearchParams p = params;
    p.seed = run_seed(params.seed, params.max_flips, params.max_tries, i, k % repetitions);
    est.outcomes[k] = solve(ds.instances[i].formula, indices[i], p);
    est.outcomes[k].model.reset();
  });
  std::size_t solved = 0;
  for (const auto &o : est.outcomes) solved += o.solved ? 1 : 0;
  est.accuracy = est.outcomes.empty() ? 1.0 : static_cast<double>(solved) / est.outcomes.size();
  return est;
}

inline AccuracyTable run_grid(const Dataset &ds, const GridSpec &grid, unsigned jobs = 1) {
  detail::require_certified(ds);
  grid.validate();
  const auto indices = detail::index_all(ds, jobs);
  const std::size_t runs = ds.size() * grid.repetitions;
  const std::size_t cells = grid.mf_values.size() * grid.mt_values.size();

  struct Run {
    bool solved;
    std::uint64_t flips;
    double seconds;
  };
  std::vector<Run> results(cells * runs);
  parallel_for(results.size(), jobs, [&](std::size_t k) {
    const std::size_t cell = k / runs;
    const std::size_t r = k % runs;
    const std::size_t i = r / grid.repetitions;
    SearchParams p;
    p.max_flips = grid.mf_values[cell / grid.mt_values.size()];
    p.max_tries = grid.mt_values[cell % grid.mt_values.size()];
    p.noise = grid.noise;
    p.strategy = grid.strategy;
    p.seed = run_seed(grid.seed, p.max_flips, p.max_tries, i, r % grid.repetitions);
    const SearchOutcome o = solve(ds.instances[i].formula, indices[i], p);
    results[k] = {o.solved, o.total_flips, std::chrono::duration<double>(o.elapsed).count()};
  });

  AccuracyTable table;
  table.dataset = dataset_identity(ds);
  table.cells.reserve(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    CellResult c;
    c.mf = grid.mf_values[cell / grid.mt_values.size()];
    c.mt = grid.mt_values[cell % grid.mt_values.size()];
    c.n = runs;
    double flips = 0.0;
    double seconds = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const Run &run = results[cell * runs + r];
      c.solved += run.solved ? 1 : 0;
      flips += static_cast<double>(run.flips);
      seconds += run.seconds;
    }
    c.accuracy = runs ? static_cast<double>(c.solved) / runs : 1.0;
    c.mean_flips = runs ? flips / runs : 0.0;
    c.mean_time = (runs && grid.record_time) ? seconds / runs : 0.0;
    table.cells.push_back(c);
  }
  return table;
}

inline bool reaches(const CellResult &c, double target) {
  // accuracy is solved / n; compare in counts to avoid rounding surprises
  return static_cast<double>(c.solved) >= target * static_cast<double>(c.n) - 1e-9;
}

inline RelativeRuntime estimate_relative_runtime(const AccuracyTable &table, double target) {
  if (table.cells.empty()) throw ContractViolation("accuracy table is empty");
  if (!(target > 0.0 && target <= 1.0)) throw ContractViolation("target accuracy must lie in (0, 1]");
  const CellResult *best = nullptr;
  double best_time = std::numeric_limits<double>::infinity();
  for (const auto &c : table.cells) {
    if (!reaches(c, target)) continue;
    best_time = std::min(best_time, c.mean_time);
    if (!best || c.mean_flips < best->mean_flips ||
        (c.mean_flips == best->mean_flips &&
         (c.mf < best->mf || (c.mf == best->mf && c.mt < best->mt))))
      best = &c;
  }
  if (!best)
    throw UnreachableAccuracy("accuracy " + format_double(target) +
                              " unreachable on this grid; extend MF or MT");
  return {target, best->mean_flips, best_time, best->mf, best->mt, best->accuracy};
}

struct ScalingPoint {
  std::uint32_t size = 0;
  RelativeRuntime runtime;
  AccuracyTable table;
};

using DatasetSource = std::function<Dataset(std::uint32_t size)>;

// One t^a estimate per size, ascending by size. `grid_for` may widen the
// grid with size; UnreachableAccuracy names the failing size.
inline std::vector<ScalingPoint> scaling_experiment(
    std::vector<std::uint32_t> sizes, double target, const DatasetSource &source,
    const std::function<GridSpec(std::uint32_t)> &grid_for, unsigned jobs = 1) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<ScalingPoint> series;
  for (std::uint32_t size : sizes) {
    ScalingPoint point;
    point.size = size;
    const Dataset ds = source(size);
    point.table = run_grid(ds, grid_for(size), jobs);
    try {
      point.runtime = estimate_relative_runtime(point.table, target);
    } catch (const UnreachableAccuracy &e) {
      throw UnreachableAccuracy("size " + std::to_string(size) + ": " + e.what());
    }
    series.push_back(std::move(point));
  }
  return series;
}

// ---- reports -------------------------------------------------------------

inline constexpr std::string_view table_csv_header = "mf,mt,n,accuracy,mean_flips,mean_time";
inline constexpr std::string_view series_csv_header =
    "size,target,t_a_flips,t_a_time,mf,mt,achieved_accuracy";

inline void write_table_csv(std::ostream &out, const AccuracyTable &table) {
  out << table_csv_header << '\n';
  for (const auto &c : table.cells)
    out << c.mf << ',' << c.mt << ',' << c.n << ',' << format_double(c.accuracy) << ','
        << format_double(c.mean_flips) << ',' << format_double(c.mean_time) << '\n';
}

inline void write_series_csv(std::ostream &out, const std::vector<ScalingPoint> &series) {
  out << series_csv_header << '\n';
  for (const auto &p : series) {
    const RelativeRuntime &r = p.runtime;
    out << p.size << ',' << format_double(r.target) << ',' << format_double(r.t_a_flips) << ','
        << format_double(r.t_a_time) << ',' << r.mf << ',' << r.mt << ','
        << format_double(r.achieved_accuracy) << '\n';
  }
}

// "size value" lines with value = log10(t^a flips).
inline void write_plot_data(std::ostream &out, const std::vector<ScalingPoint> &series) {
  for (const auto &p : series)
    out << p.size << ' ' << format_double(std::log10(std::max(p.runtime.t_a_flips, 1.0))) << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T csv_number(const std::string &s, std::size_t lineno) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(lineno, "invalid number '" + s + "'");
  return value;
}

}  // namespace detail

inline AccuracyTable read_table_csv(std::istream &in) {
  AccuracyTable table;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || (++lineno, line != table_csv_header))
    throw ParseError(1, "expected header '" + std::string(table_csv_header) + "'");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 6) throw ParseError(lineno, "expected 6 fields");
    CellResult c;
    c.mf = detail::csv_number<std::uint64_t>(f[0], lineno);
    c.mt = detail::csv_number<std::uint64_t>(f[1], lineno);
    c.n = detail::csv_number<std::size_t>(f[2], lineno);
    c.accuracy = detail::csv_number<double>(f[3], lineno);
    c.mean_flips = detail::csv_number<double>(f[4], lineno);
    c.mean_time = detail::csv_number<double>(f[5], lineno);
    c.solved = static_cast<std::size_t>(std::llround(c.accuracy * static_cast<double>(c.n)));
    table.cells.push_back(c);
  }
  return table;
}

template <typename Writer>
void write_file(const std::filesystem::path &path, Writer &&write) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline void emit_report(const AccuracyTable &table, const std::filesystem::path &csv_path) {
  write_file(csv_path, [&](std::ostream &out) { write_table_csv(out, table); });
}

inline void emit_report(const std::vector<ScalingPoint> &series, const std::filesystem::path &csv_path,
                        const std::filesystem::path &plot_path = {}) {
  write_file(csv_path, [&](std::ostream &out) { write_series_csv(out, series); });
  if (!plot_path.empty()) write_file(plot_path, [&](std::ostream &out) { write_plot_data(out, series); });
}

}  // namespace gsat
