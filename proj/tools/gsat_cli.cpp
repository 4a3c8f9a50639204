// gsat: instance generation, complete and local-search solving, model
// counting, and accuracy / relative-running-time experiments.
//
// Exit status: 0 on success, 1 on an UNSAT / GIVEUP / UNREACHABLE verdict,
// 2 on usage or input errors. Verdicts and results go to stdout, every
// diagnostic to stderr.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsat/gsat.hpp"

namespace fs = std::filesystem;
using namespace gsat;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Formula load_formula(const std::string &path) {
  if (path == "-") return parse_dimacs(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  try {
    return parse_dimacs(in);
  } catch (const ParseError &e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Writes to `path`, or stdout when path is empty.
template <typename Fn>
void with_output(const std::string &path, Fn &&fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  fn(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct SeedOption {
  std::uint64_t value = 0;
  CLI::Option *option = nullptr;

  void add(CLI::App *app) { option = app->add_option("--seed", value, "Random seed (default 0)"); }

  std::uint64_t get() const {
    if (option->count() == 0) std::cerr << "c seed defaulted to 0\n";
    return value;
  }
};

struct WalkFlags {
  std::string strategy = "skc-walk";
  double noise = 0.5;

  void add(CLI::App *app) {
    app->add_option("--strategy", strategy, "Flip rule")
        ->check(CLI::IsMember({"gsat-walk", "skc-walk"}))
        ->capture_default_str();
    app->add_option("--noise", noise, "Walk probability p")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  }

  Strategy parsed() const { return *parse_strategy(strategy); }
};

struct GridFlags {
  std::vector<std::uint64_t> mf = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  std::vector<std::uint64_t> mt = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  unsigned reps = 1;
  bool no_timing = false;

  void add(CLI::App *app) {
    app->add_option("--mf", mf, "Comma-separated ascending MF values")->delimiter(',')->check(CLI::PositiveNumber);
    app->add_option("--mt", mt, "Comma-separated ascending MT values")->delimiter(',')->check(CLI::PositiveNumber);
    app->add_option("--reps", reps, "Runs per instance and cell")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_flag("--no-timing", no_timing, "Write 0 for wall-clock columns (byte-reproducible output)");
  }

  GridSpec spec(const WalkFlags &walk, std::uint64_t seed) const {
    GridSpec g;
    g.mf_values = mf;
    g.mt_values = mt;
    g.noise = walk.noise;
    g.strategy = walk.parsed();
    g.seed = seed;
    g.repetitions = reps;
    g.record_time = !no_timing;
    try {
      g.validate();
    } catch (const ContractViolation &e) {
      throw UsageError(e.what());
    }
    return g;
  }
};

struct FamilyFlags {
  std::string family = "random3cnf";
  double ratio = 4.25;
  std::uint32_t colors = 3;
  std::size_t count = 100;
  std::string filter = "satisfiable-only";
  std::uint64_t lo = 1;
  std::optional<std::uint64_t> hi;
  std::uint64_t cap = 1'000'000;
  std::size_t max_candidates = 0;

  void add(CLI::App *app) {
    app->add_option("--family", family, "Instance family")
        ->check(CLI::IsMember({"random3cnf", "coloring"}))
        ->capture_default_str();
    app->add_option("--ratio", ratio, "Clause-to-variable ratio L (random3cnf)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--colors", colors, "Colors k (coloring)")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--count", count, "Instances to keep")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--filter", filter, "Candidate filter")
        ->check(CLI::IsMember({"none", "satisfiable-only", "count-range"}))
        ->capture_default_str();
    app->add_option("--lo", lo, "count-range: keep more than lo models")->capture_default_str();
    app->add_option("--hi", hi, "count-range: keep at most hi models (default unbounded)");
    app->add_option("--cap", cap, "Counting cap when --hi is unbounded")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--max-candidates", max_candidates, "Give up after this many candidates (0: never)");
  }

  DatasetSpec spec(std::uint32_t size, std::uint64_t seed) const {
    DatasetSpec s;
    s.family = *parse_family(family);
    s.size = size;
    s.ratio = ratio;
    s.colors = colors;
    s.count = count;
    s.filter = *parse_filter(filter);
    s.lo = lo;
    if (hi) s.hi = *hi;
    s.cap = cap;
    s.master_seed = seed;
    s.max_candidates = max_candidates;
    try {
      s.validate();
    } catch (const ContractViolation &e) {
      throw UsageError(e.what());
    }
    return s;
  }
};

void print_relative_runtime(const RelativeRuntime &r) {
  std::cout << "t_a_flips=" << format_double(r.t_a_flips) << " t_a_time=" << format_double(r.t_a_time)
            << " mf=" << r.mf << " mt=" << r.mt << " accuracy=" << format_double(r.achieved_accuracy)
            << " target=" << format_double(r.target) << '\n';
}

Dataset load_certified(const std::string &dir) {
  if (!fs::is_directory(dir)) throw UsageError("dataset directory '" + dir + "' does not exist");
  Dataset ds = load_dataset(dir);
  if (!ds.certified()) throw UsageError("dataset '" + dir + "' is not certified satisfiable");
  return ds;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Random-walk GSAT toolkit: generators, solvers, model counting and accuracy experiments"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "Worker threads for datasets and experiments")->check(CLI::PositiveNumber);

  std::function<int()> action;

  // gen3cnf
  auto *gen3 = app.add_subcommand("gen3cnf", "Random fixed-length 3-CNF formula");
  std::uint32_t gen3_vars = 0;
  double gen3_ratio = 4.25;
  std::string gen3_out;
  SeedOption gen3_seed;
  gen3->add_option("--vars", gen3_vars, "Variables N")->required()->check(CLI::Range(3u, 1u << 30));
  gen3->add_option("--ratio", gen3_ratio, "Clause-to-variable ratio L")->check(CLI::PositiveNumber)->capture_default_str();
  gen3->add_option("--out", gen3_out, "Output file (default stdout)");
  gen3_seed.add(gen3);
  gen3->callback([&] {
    action = [&] {
      const std::uint64_t seed = gen3_seed.get();
      Rng rng(seed);
      const Formula f = random_3cnf(gen3_vars, gen3_ratio, rng);
      with_output(gen3_out, [&](std::ostream &out) {
        write_dimacs(out, f,
                     {"generator random3cnf n=" + std::to_string(gen3_vars) + " ratio=" + format_double(gen3_ratio),
                      "seed " + std::to_string(seed)});
      });
      return exit_ok;
    };
  });

  // gen2tree
  auto *gen2 = app.add_subcommand("gen2tree", "Random 2-tree in DIMACS graph format");
  std::uint32_t gen2_vertices = 0;
  std::string gen2_out;
  SeedOption gen2_seed;
  gen2->add_option("--vertices", gen2_vertices, "Vertices p")->required()->check(CLI::Range(3u, 1u << 24));
  gen2->add_option("--out", gen2_out, "Output file (default stdout)");
  gen2_seed.add(gen2);
  gen2->callback([&] {
    action = [&] {
      const std::uint64_t seed = gen2_seed.get();
      Rng rng(seed);
      const Graph g = random_2tree(gen2_vertices, rng);
      with_output(gen2_out, [&](std::ostream &out) {
        write_graph(out, g, {"generator 2tree p=" + std::to_string(gen2_vertices), "seed " + std::to_string(seed)});
      });
      return exit_ok;
    };
  });

  // encode-color
  auto *enc = app.add_subcommand("encode-color", "CNF whose models are the proper k-colorings of a graph");
  std::uint32_t enc_colors = 3;
  std::string enc_graph;
  std::uint32_t enc_vertices = 0;
  std::string enc_out;
  SeedOption enc_seed;
  enc->add_option("--colors", enc_colors, "Colors k")->check(CLI::PositiveNumber)->capture_default_str();
  auto *graph_opt = enc->add_option("--graph", enc_graph, "Graph file (DIMACS edge format)");
  auto *vert_opt = enc->add_option("--vertices", enc_vertices, "Generate a random 2-tree with p vertices instead")
                       ->check(CLI::Range(3u, 1u << 24));
  graph_opt->excludes(vert_opt);
  enc->add_option("--out", enc_out, "Output file (default stdout)");
  enc_seed.add(enc);
  enc->callback([&] {
    action = [&] {
      Graph g;
      std::vector<std::string> comments;
      if (!enc_graph.empty()) {
        std::ifstream in(enc_graph);
        if (!in) throw UsageError("cannot open graph file '" + enc_graph + "'");
        try {
          g = read_graph(in);
        } catch (const ParseError &e) {
          throw UsageError(enc_graph + ": " + e.what());
        }
        comments.push_back("generator coloring k=" + std::to_string(enc_colors) + " graph=" + enc_graph);
      } else if (enc_vertices) {
        const std::uint64_t seed = enc_seed.get();
        Rng rng(seed);
        g = random_2tree(enc_vertices, rng);
        comments.push_back("generator coloring p=" + std::to_string(enc_vertices) + " k=" + std::to_string(enc_colors));
        comments.push_back("seed " + std::to_string(seed));
      } else {
        throw UsageError("encode-color needs --graph <file> or --vertices <p>");
      }
      const auto encoding = encode_coloring(g, enc_colors);
      with_output(enc_out, [&](std::ostream &out) { write_dimacs(out, encoding.formula, comments); });
      return exit_ok;
    };
  });

  // dataset
  auto *dsc = app.add_subcommand("dataset", "Build a filtered dataset directory");
  FamilyFlags ds_family;
  std::uint32_t ds_size = 0;
  std::string ds_out;
  SeedOption ds_seed;
  ds_family.add(dsc);
  dsc->add_option("--size", ds_size, "N (random3cnf) or p (coloring)")->required()->check(CLI::Range(3u, 1u << 24));
  dsc->add_option("--out", ds_out, "Output directory")->required();
  ds_seed.add(dsc);
  dsc->callback([&] {
    action = [&] {
      const DatasetSpec spec = ds_family.spec(ds_size, ds_seed.get());
      const Dataset ds = build_dataset(spec, jobs, [](std::size_t kept, std::size_t tried) {
        std::cerr << "c kept " << kept << " of " << tried << " candidates\n";
      });
      save_dataset(ds, ds_out);
      std::cout << "instances=" << ds.size() << " candidates=" << ds.candidates_tried
                << " certified=" << (ds.certified() ? 1 : 0) << '\n';
      return exit_ok;
    };
  });

  // solve
  auto *solvec = app.add_subcommand("solve", "Complete DPLL satisfiability decision");
  std::string solve_file;
  solvec->add_option("file", solve_file, "DIMACS CNF file ('-' for stdin)")->required();
  solvec->callback([&] {
    action = [&] {
      const Formula f = load_formula(solve_file);
      const auto model = decide_sat(f);
      if (!model) {
        std::cout << "UNSAT\n";
        return exit_negative;
      }
      std::cout << "SAT\n" << model_line(*model) << '\n';
      return exit_ok;
    };
  });

  // walksat
  auto *walk = app.add_subcommand("walksat", "Random-walk GSAT local search");
  std::string walk_file;
  std::uint64_t walk_mf = 1000;
  std::uint64_t walk_mt = 10;
  WalkFlags walk_flags;
  SeedOption walk_seed;
  walk->add_option("--mf", walk_mf, "Max flips per try")->capture_default_str();
  walk->add_option("--mt", walk_mt, "Max tries")->check(CLI::PositiveNumber)->capture_default_str();
  walk_flags.add(walk);
  walk_seed.add(walk);
  walk->add_option("file", walk_file, "DIMACS CNF file ('-' for stdin)")->required();
  walk->callback([&] {
    action = [&] {
      SearchParams p;
      p.max_flips = walk_mf;
      p.max_tries = walk_mt;
      p.noise = walk_flags.noise;
      p.strategy = walk_flags.parsed();
      p.seed = walk_seed.get();
      const Formula f = load_formula(walk_file);
      const SearchOutcome o = solve(f, p);
      if (o.solved)
        std::cout << "SAT\n" << model_line(*o.model) << '\n';
      else
        std::cout << "GIVEUP\n";
      std::cerr << "tries=" << o.tries_used << " flips=" << o.total_flips
                << " millis=" << std::chrono::duration_cast<std::chrono::milliseconds>(o.elapsed).count() << '\n';
      return o.solved ? exit_ok : exit_negative;
    };
  });

  // count
  auto *countc = app.add_subcommand("count", "Exact model count with an optional cap");
  std::string count_file;
  std::uint64_t count_cap = 1'000'000;
  bool count_nocap = false;
  auto *cap_opt = countc->add_option("--cap", count_cap, "Stop once the count exceeds this")
                      ->check(CLI::PositiveNumber)
                      ->capture_default_str();
  countc->add_flag("--no-cap", count_nocap, "Count exactly, however large")->excludes(cap_opt);
  countc->add_option("file", count_file, "DIMACS CNF file ('-' for stdin)")->required();
  countc->callback([&] {
    action = [&] {
      const Formula f = load_formula(count_file);
      const CountResult r = count_models(f, count_nocap ? std::nullopt : std::optional<Count>(count_cap));
      if (r.capped)
        std::cout << ">" << to_string(r.count) << " capped\n";
      else
        std::cout << to_string(r.count) << " exact\n";
      return exit_ok;
    };
  });

  // grid
  auto *gridc = app.add_subcommand("grid", "Accuracy / cost table over an (MF, MT) grid");
  std::string grid_dataset;
  std::string grid_out;
  GridFlags grid_flags;
  WalkFlags grid_walk;
  SeedOption grid_seed;
  gridc->add_option("--dataset", grid_dataset, "Certified dataset directory")->required();
  gridc->add_option("--out", grid_out, "Directory for grid.csv");
  grid_flags.add(gridc);
  grid_walk.add(gridc);
  grid_seed.add(gridc);
  gridc->callback([&] {
    action = [&] {
      const GridSpec g = grid_flags.spec(grid_walk, grid_seed.get());
      const Dataset ds = load_certified(grid_dataset);
      const AccuracyTable table = run_grid(ds, g, jobs);
      write_table_csv(std::cout, table);
      if (!grid_out.empty()) emit_report(table, fs::path(grid_out) / "grid.csv");
      return exit_ok;
    };
  });

  // ta
  auto *tac = app.add_subcommand("ta", "Relative running time t^a from a grid");
  double ta_accuracy = 0.95;
  std::string ta_dataset;
  std::string ta_table;
  std::string ta_out;
  GridFlags ta_flags;
  WalkFlags ta_walk;
  SeedOption ta_seed;
  tac->add_option("--accuracy", ta_accuracy, "Target accuracy a")->required()->check(CLI::Range(0.0, 1.0));
  auto *ta_ds_opt = tac->add_option("--dataset", ta_dataset, "Certified dataset directory (runs the grid)");
  auto *ta_tab_opt = tac->add_option("--table", ta_table, "Existing grid.csv instead of running a grid");
  ta_ds_opt->excludes(ta_tab_opt);
  tac->add_option("--out", ta_out, "Directory for grid.csv");
  ta_flags.add(tac);
  ta_walk.add(tac);
  ta_seed.add(tac);
  tac->callback([&] {
    action = [&] {
      if (!(ta_accuracy > 0.0)) throw UsageError("--accuracy must be in (0, 1]");
      AccuracyTable table;
      if (!ta_table.empty()) {
        std::ifstream in(ta_table);
        if (!in) throw UsageError("cannot open table '" + ta_table + "'");
        try {
          table = read_table_csv(in);
        } catch (const ParseError &e) {
          throw UsageError(ta_table + ": " + e.what());
        }
      } else if (!ta_dataset.empty()) {
        const GridSpec g = ta_flags.spec(ta_walk, ta_seed.get());
        table = run_grid(load_certified(ta_dataset), g, jobs);
        if (!ta_out.empty()) emit_report(table, fs::path(ta_out) / "grid.csv");
      } else {
        throw UsageError("ta needs --dataset <dir> or --table <csv>");
      }
      try {
        print_relative_runtime(estimate_relative_runtime(table, ta_accuracy));
      } catch (const UnreachableAccuracy &e) {
        std::cout << "UNREACHABLE\n";
        std::cerr << e.what() << '\n';
        return exit_negative;
      }
      return exit_ok;
    };
  });

  // scale
  auto *scalec = app.add_subcommand("scale", "t^a as a function of instance size");
  std::vector<std::uint32_t> scale_sizes;
  double scale_accuracy = 0.95;
  std::string scale_dataset;
  std::string scale_out;
  FamilyFlags scale_family;
  GridFlags scale_flags;
  WalkFlags scale_walk;
  SeedOption scale_seed;
  scalec->add_option("--sizes", scale_sizes, "Comma-separated sizes (N or p)")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(3u, 1u << 24));
  scalec->add_option("--accuracy", scale_accuracy, "Target accuracy a")->required()->check(CLI::Range(0.0, 1.0));
  scalec->add_option("--dataset", scale_dataset, "Parent directory holding one dataset per size, named by size");
  scalec->add_option("--out", scale_out, "Directory for scaling.csv, scaling.dat and per-size grids");
  scale_family.add(scalec);
  scale_flags.add(scalec);
  scale_walk.add(scalec);
  scale_seed.add(scalec);
  scalec->callback([&] {
    action = [&] {
      if (!(scale_accuracy > 0.0)) throw UsageError("--accuracy must be in (0, 1]");
      const std::uint64_t seed = scale_seed.get();
      const GridSpec g = scale_flags.spec(scale_walk, seed);
      for (auto size : scale_sizes) {
        if (!scale_dataset.empty()) {
          const fs::path dir = fs::path(scale_dataset) / std::to_string(size);
          if (!fs::is_directory(dir)) throw UsageError("dataset directory '" + dir.string() + "' does not exist");
        } else {
          (void)scale_family.spec(size, seed);
        }
      }
      DatasetSource source = [&](std::uint32_t size) {
        if (!scale_dataset.empty()) return load_certified((fs::path(scale_dataset) / std::to_string(size)).string());
        return build_dataset(scale_family.spec(size, seed), jobs);
      };
      std::vector<ScalingPoint> series;
      try {
        series = scaling_experiment(scale_sizes, scale_accuracy, source, [&](std::uint32_t) { return g; }, jobs);
      } catch (const UnreachableAccuracy &e) {
        std::cout << "UNREACHABLE\n";
        std::cerr << e.what() << '\n';
        return exit_negative;
      }
      write_series_csv(std::cout, series);
      if (!scale_out.empty()) {
        const fs::path out(scale_out);
        emit_report(series, out / "scaling.csv", out / "scaling.dat");
        for (const auto &p : series) emit_report(p.table, out / ("grid_" + std::to_string(p.size) + ".csv"));
      }
      return exit_ok;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    return action();
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
}
