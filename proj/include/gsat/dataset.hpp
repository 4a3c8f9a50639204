#pragma once

// Dataset construction and persistence.
//
// Candidate j of a dataset is generated from seed derive_seed(master, j).
// Candidates are filtered in index order and the first `count` that pass
// are kept, so a dataset is a pure function of its spec. Filtering runs in
// parallel batches but commits strictly by candidate index.
//
// On disk a dataset is a directory holding `manifest` (one key=value per
// line) and one DIMACS file per instance, named 0000.cnf, 0001.cnf, ...

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gsat/cnf.hpp"
#include "gsat/dimacs.hpp"
#include "gsat/dpll.hpp"
#include "gsat/generators.hpp"
#include "gsat/parallel.hpp"
#include "gsat/rng.hpp"

namespace gsat {

enum class Family { random3cnf, coloring };
enum class Filter { none, satisfiable_only, count_range };

inline std::string_view to_string(Family f) { return f == Family::random3cnf ? "random3cnf" : "coloring"; }

inline std::string_view to_string(Filter f) {
  switch (f) {
    case Filter::none: return "none";
    case Filter::satisfiable_only: return "satisfiable-only";
    case Filter::count_range: return "count-range";
  }
  return "none";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "random3cnf") return Family::random3cnf;
  if (s == "coloring") return Family::coloring;
  return std::nullopt;
}

inline std::optional<Filter> parse_filter(std::string_view s) {
  if (s == "none") return Filter::none;
  if (s == "satisfiable-only") return Filter::satisfiable_only;
  if (s == "count-range") return Filter::count_range;
  return std::nullopt;
}

struct DatasetSpec {
  Family family = Family::random3cnf;
  std::uint32_t size = 0;   // N for random3cnf, p for coloring
  double ratio = 4.25;      // L, random3cnf only
  std::uint32_t colors = 3; // k, coloring only
  std::size_t count = 0;
  Filter filter = Filter::satisfiable_only;
  Count lo = 1;              // count-range keeps lo < models <= hi
  std::optional<Count> hi;   // unbounded when empty
  Count cap = default_count_cap;  // counting cap used when hi is unbounded
  std::uint64_t master_seed = 0;
  std::size_t max_candidates = 0;  // 0: no limit

  void validate() const {
    if (family == Family::random3cnf && size < 3)
      throw ContractViolation("random3cnf datasets need at least 3 variables");
    if (family == Family::random3cnf && !(ratio > 0.0))
      throw ContractViolation("clause-to-variable ratio must be positive");
    if (family == Family::coloring && size < 3)
      throw ContractViolation("2-trees have at least 3 vertices");
    if (family == Family::coloring && colors < 1)
      throw ContractViolation("at least one color is required");
    if (family == Family::coloring && colors < 3 && filter != Filter::none)
      throw ContractViolation("2-trees are not " + std::to_string(colors) + "-colorable");
    if (filter == Filter::count_range) {
      if (family != Family::random3cnf)
        throw ContractViolation("count-range filtering applies to random3cnf datasets");
      if (lo < 1) throw ContractViolation("count range needs lo >= 1");
      if (hi && !(lo < *hi)) throw ContractViolation("count range needs lo < hi");
      if (!hi && !(lo < cap)) throw ContractViolation("count range needs lo < cap");
    }
  }
};

struct Instance {
  std::size_t candidate = 0;
  std::uint64_t seed = 0;
  Formula formula;
  bool certified = false;            // known satisfiable
  std::optional<CountResult> models; // when counted or known in closed form
};

struct Dataset {
  DatasetSpec spec;
  std::vector<Instance> instances;
  std::size_t candidates_tried = 0;

  bool certified() const {
    for (const auto &inst : instances)
      if (!inst.certified) return false;
    return true;
  }
  std::size_t size() const { return instances.size(); }
};

inline Formula generate_candidate(const DatasetSpec &spec, std::uint64_t seed) {
  Rng rng(seed);
  if (spec.family == Family::random3cnf) return random_3cnf(spec.size, spec.ratio, rng);
  return encode_coloring(random_2tree(spec.size, rng), spec.colors).formula;
}

// lo < models <= hi, where `r` came from counting with cap hi (or the
// spec's cap when hi is unbounded).
inline bool count_in_range(const DatasetSpec &spec, const CountResult &r) {
  const bool above_lo = r.capped || r.count > spec.lo;
  const bool within_hi = !spec.hi || (!r.capped && r.count <= *spec.hi);
  return above_lo && within_hi;
}

namespace detail {

struct Verdict {
  bool keep = false;
  bool certified = false;
  std::optional<CountResult> models;
};

inline Verdict judge(const DatasetSpec &spec, const Formula &f) {
  Verdict v;
  if (spec.family == Family::coloring) {
    v.keep = true;
    if (spec.colors >= 3) {
      v.certified = true;
      v.models = CountResult{two_tree_coloring_count(spec.size, spec.colors), false};
    }
    return v;
  }
  switch (spec.filter) {
    case Filter::none:
      v.keep = true;
      break;
    case Filter::satisfiable_only:
      v.keep = v.certified = decide_sat(f).has_value();
      break;
    case Filter::count_range: {
      const CountResult r = count_models(f, spec.hi ? *spec.hi : spec.cap);
      v.keep = count_in_range(spec, r);
      v.certified = r.capped || r.count > 0;
      v.models = r;
      break;
    }
  }
  return v;
}

}  // namespace detail

using ProgressFn = std::function<void(std::size_t kept, std::size_t tried)>;

inline Dataset build_dataset(const DatasetSpec &spec, unsigned jobs = 1,
                             const ProgressFn &progress = {}) {
  spec.validate();
  Dataset ds;
  ds.spec = spec;
  const std::size_t batch = 8 * static_cast<std::size_t>(std::max(1u, jobs));
  std::size_t next = 0;
  while (ds.instances.size() < spec.count) {
    std::size_t n = batch;
    if (spec.max_candidates) {
      if (next >= spec.max_candidates)
        throw std::runtime_error("dataset not filled after " + std::to_string(next) +
                                 " candidates (" + std::to_string(ds.instances.size()) + " kept)");
      n = std::min(n, spec.max_candidates - next);
    }
    std::vector<Instance> candidates(n);
    std::vector<detail::Verdict> verdicts(n);
    parallel_for(n, jobs, [&](std::size_t i) {
      Instance &c = candidates[i];
      c.candidate = next + i;
      c.seed = derive_seed(spec.master_seed, c.candidate);
      c.formula = generate_candidate(spec, c.seed);
      verdicts[i] = detail::judge(spec, c.formula);
    });
    for (std::size_t i = 0; i < n && ds.instances.size() < spec.count; ++i) {
      ds.candidates_tried = next + i + 1;
      if (!verdicts[i].keep) continue;
      candidates[i].certified = verdicts[i].certified;
      candidates[i].models = verdicts[i].models;
      ds.instances.push_back(std::move(candidates[i]));
    }
    next += n;
    if (progress) progress(ds.instances.size(), ds.candidates_tried);
  }
  return ds;
}

inline Dataset build_satisfiable_dataset(DatasetSpec spec, unsigned jobs = 1,
                                         const ProgressFn &progress = {}) {
  spec.filter = Filter::satisfiable_only;
  return build_dataset(spec, jobs, progress);
}

inline Dataset build_count_bucketed_dataset(DatasetSpec spec, unsigned jobs = 1,
                                            const ProgressFn &progress = {}) {
  spec.filter = Filter::count_range;
  return build_dataset(spec, jobs, progress);
}

// Bucket bounds p_0 = 1, p_k = 2^(k-3) * 100 for k >= 1 (p_1 = 25).
inline Count solution_bucket_bound(unsigned k) {
  if (k == 0) return 1;
  if (k < 3) return Count{100} >> (3 - k);
  return Count{100} << (k - 3);
}

// ---- persistence ---------------------------------------------------------

inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string instance_filename(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return digits + ".cnf";
}

inline std::string format_models(const CountResult &r) {
  return r.capped ? ">" + to_string(r.count) : to_string(r.count);
}

inline std::vector<std::string> instance_comments(const DatasetSpec &spec, const Instance &inst) {
  std::string generator = std::string(to_string(spec.family)) + ' ';
  if (spec.family == Family::random3cnf)
    generator += "n=" + std::to_string(spec.size) + " ratio=" + format_double(spec.ratio);
  else
    generator += "p=" + std::to_string(spec.size) + " k=" + std::to_string(spec.colors);
  return {"generator " + generator, "seed " + std::to_string(inst.seed)};
}

inline std::string manifest_text(const Dataset &ds) {
  const DatasetSpec &s = ds.spec;
  std::ostringstream out;
  out << "format=gsat-dataset-1\n";
  out << "family=" << to_string(s.family) << '\n';
  out << "size=" << s.size << '\n';
  out << "ratio=" << format_double(s.ratio) << '\n';
  out << "colors=" << s.colors << '\n';
  out << "count=" << s.count << '\n';
  out << "filter=" << to_string(s.filter) << '\n';
  out << "lo=" << to_string(s.lo) << '\n';
  out << "hi=" << (s.hi ? to_string(*s.hi) : std::string()) << '\n';
  out << "cap=" << to_string(s.cap) << '\n';
  out << "master_seed=" << s.master_seed << '\n';
  out << "max_candidates=" << s.max_candidates << '\n';
  out << "candidates_tried=" << ds.candidates_tried << '\n';
  out << "certified=" << (ds.certified() ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    const Instance &inst = ds.instances[i];
    const std::string key = "instance." + instance_filename(i).substr(0, instance_filename(i).size() - 4);
    out << key << ".candidate=" << inst.candidate << '\n';
    out << key << ".seed=" << inst.seed << '\n';
    out << key << ".certified=" << (inst.certified ? 1 : 0) << '\n';
    out << key << ".models=" << (inst.models ? format_models(*inst.models) : "unknown") << '\n';
  }
  return out.str();
}

inline void save_dataset(const Dataset &ds, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    const auto path = dir / instance_filename(i);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_dimacs(out, ds.instances[i].formula, instance_comments(ds.spec, ds.instances[i]));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  const auto path = dir / "manifest";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest_text(ds);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace detail {

inline Count parse_count(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty count");
  Count value = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad count '" + std::string(s) + "'");
    value = value * 10 + static_cast<unsigned>(ch - '0');
  }
  return value;
}

template <typename T>
T parse_field(const std::map<std::string, std::string> &kv, const std::string &key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("manifest lacks '" + key + "'");
  T value{};
  const std::string &s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("manifest field '" + key + "' has invalid value '" + s + "'");
  return value;
}

inline const std::string &field(const std::map<std::string, std::string> &kv, const std::string &key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("manifest lacks '" + key + "'");
  return it->second;
}

}  // namespace detail

struct Manifest {
  DatasetSpec spec;
  std::size_t candidates_tried = 0;
  bool certified = false;
  std::map<std::string, std::string> fields;
};

inline Manifest read_manifest(const std::filesystem::path &dir) {
  const auto path = dir / "manifest";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    m.fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  using detail::field;
  using detail::parse_field;
  if (field(m.fields, "format") != "gsat-dataset-1")
    throw std::runtime_error(path.string() + ": unsupported manifest format");
  auto family = parse_family(field(m.fields, "family"));
  auto filter = parse_filter(field(m.fields, "filter"));
  if (!family || !filter) throw std::runtime_error(path.string() + ": bad family or filter");
  DatasetSpec &s = m.spec;
  s.family = *family;
  s.filter = *filter;
  s.size = parse_field<std::uint32_t>(m.fields, "size");
  s.ratio = parse_field<double>(m.fields, "ratio");
  s.colors = parse_field<std::uint32_t>(m.fields, "colors");
  s.count = parse_field<std::size_t>(m.fields, "count");
  s.lo = detail::parse_count(field(m.fields, "lo"));
  const std::string &hi = field(m.fields, "hi");
  if (!hi.empty()) s.hi = detail::parse_count(hi);
  s.cap = detail::parse_count(field(m.fields, "cap"));
  s.master_seed = parse_field<std::uint64_t>(m.fields, "master_seed");
  s.max_candidates = parse_field<std::size_t>(m.fields, "max_candidates");
  m.candidates_tried = parse_field<std::size_t>(m.fields, "candidates_tried");
  m.certified = field(m.fields, "certified") == "1";
  return m;
}

// Reads the manifest and instance files. Instance metadata comes from the
// manifest; formulas come from the .cnf files.
inline Dataset load_dataset(const std::filesystem::path &dir) {
  const Manifest m = read_manifest(dir);
  Dataset ds;
  ds.spec = m.spec;
  ds.candidates_tried = m.candidates_tried;
  for (std::size_t i = 0;; ++i) {
    const std::string stem = instance_filename(i).substr(0, instance_filename(i).size() - 4);
    const std::string key = "instance." + stem;
    if (!m.fields.count(key + ".seed")) break;
    Instance inst;
    inst.candidate = detail::parse_field<std::size_t>(m.fields, key + ".candidate");
    inst.seed = detail::parse_field<std::uint64_t>(m.fields, key + ".seed");
    inst.certified = detail::field(m.fields, key + ".certified") == "1";
    const std::string &models = detail::field(m.fields, key + ".models");
    if (models != "unknown") {
      const bool capped = !models.empty() && models.front() == '>';
      inst.models = CountResult{detail::parse_count(capped ? models.substr(1) : models), capped};
    }
    const auto path = dir / instance_filename(i);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    try {
      inst.formula = parse_dimacs(in);
    } catch (const ParseError &e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
    ds.instances.push_back(std::move(inst));
  }
  if (ds.instances.size() != ds.spec.count)
    throw std::runtime_error(dir.string() + ": manifest lists " + std::to_string(ds.instances.size()) +
                             " instances, expected " + std::to_string(ds.spec.count));
  return ds;
}

// Rebuilds the dataset described by the manifest in `dir`.
inline Dataset regenerate_dataset(const std::filesystem::path &dir, unsigned jobs = 1) {
  return build_dataset(read_manifest(dir).spec, jobs);
}

}  // namespace gsat
