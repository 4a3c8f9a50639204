#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gsat/dataset.hpp"
#include "oracles.hpp"

using namespace gsat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("gsat_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

DatasetSpec small_spec(std::uint32_t n, std::size_t count, std::uint64_t seed) {
  DatasetSpec spec;
  spec.size = n;
  spec.ratio = 4.25;
  spec.count = count;
  spec.master_seed = seed;
  return spec;
}

}  // namespace

TEST(Dataset, SatisfiableInstancesVerifiedByEnumeration) {
  const Dataset ds = build_satisfiable_dataset(small_spec(20, 10, 1));
  ASSERT_EQ(ds.size(), 10u);
  EXPECT_TRUE(ds.certified());
  for (const auto &inst : ds.instances) {
    EXPECT_EQ(inst.formula.num_vars(), 20u);
    EXPECT_EQ(inst.formula.num_clauses(), 85u);
    EXPECT_TRUE(oracle::brute_satisfiable(inst.formula));
  }
}

TEST(Dataset, RejectedCandidatesAreUnsatisfiable) {
  const DatasetSpec spec = small_spec(18, 20, 2);
  const Dataset ds = build_satisfiable_dataset(spec);
  std::size_t k = 0;
  for (std::size_t j = 0; j < ds.candidates_tried; ++j) {
    const Formula f = generate_candidate(spec, derive_seed(spec.master_seed, j));
    const bool kept = k < ds.size() && ds.instances[k].candidate == j;
    EXPECT_EQ(oracle::brute_satisfiable(f), kept) << "candidate " << j;
    if (kept) {
      EXPECT_EQ(ds.instances[k].formula, f);
      ++k;
    }
  }
  EXPECT_EQ(k, ds.size());
}

TEST(Dataset, KeptFractionNearCrossover) {
  const Dataset ds = build_satisfiable_dataset(small_spec(50, 100, 3));
  const double kept = static_cast<double>(ds.size()) / ds.candidates_tried;
  EXPECT_GE(kept, 0.2);
  EXPECT_LE(kept, 0.8);
}

TEST(Dataset, BucketBounds) {
  EXPECT_EQ(solution_bucket_bound(0), Count{1});
  EXPECT_EQ(solution_bucket_bound(1), Count{25});
  EXPECT_EQ(solution_bucket_bound(2), Count{50});
  EXPECT_EQ(solution_bucket_bound(3), Count{100});
  EXPECT_EQ(solution_bucket_bound(11), Count{25600});
}

TEST(Dataset, CountBucketVerifiedByEnumeration) {
  DatasetSpec spec = small_spec(20, 8, 4);
  spec.lo = 1;
  spec.hi = 10;
  const Dataset ds = build_count_bucketed_dataset(spec);
  ASSERT_EQ(ds.size(), 8u);
  for (const auto &inst : ds.instances) {
    const auto n = oracle::brute_count(inst.formula);
    EXPECT_GT(n, 1u);
    EXPECT_LE(n, 10u);
    ASSERT_TRUE(inst.models);
    EXPECT_FALSE(inst.models->capped);
    EXPECT_EQ(inst.models->count, Count{n});
    EXPECT_TRUE(inst.certified);
  }
}

TEST(Dataset, CountRangeBoundaries) {
  DatasetSpec spec;
  spec.filter = Filter::count_range;
  spec.lo = 25;
  spec.hi = 50;
  EXPECT_FALSE(count_in_range(spec, {25, false}));
  EXPECT_TRUE(count_in_range(spec, {26, false}));
  EXPECT_TRUE(count_in_range(spec, {50, false}));
  EXPECT_FALSE(count_in_range(spec, {50, true}));  // capped at hi: more than hi models
  spec.hi.reset();
  spec.cap = 1000;
  EXPECT_TRUE(count_in_range(spec, {1000, true}));
  EXPECT_FALSE(count_in_range(spec, {3, false}));
}

TEST(Dataset, SpecValidation) {
  DatasetSpec spec = small_spec(2, 1, 0);
  EXPECT_THROW(build_dataset(spec), ContractViolation);
  spec = small_spec(20, 1, 0);
  spec.filter = Filter::count_range;
  spec.lo = 10;
  spec.hi = 10;
  EXPECT_THROW(build_dataset(spec), ContractViolation);
  spec.lo = 0;
  spec.hi = 10;
  EXPECT_THROW(build_dataset(spec), ContractViolation);
  DatasetSpec col;
  col.family = Family::coloring;
  col.size = 5;
  col.colors = 2;
  col.count = 1;
  EXPECT_THROW(build_dataset(col), ContractViolation);
  col.filter = Filter::count_range;
  col.colors = 3;
  EXPECT_THROW(build_dataset(col), ContractViolation);
}

TEST(Dataset, CandidateLimit) {
  DatasetSpec spec = small_spec(20, 5, 5);
  spec.ratio = 8.0;  // essentially never satisfiable
  spec.max_candidates = 20;
  EXPECT_THROW(build_satisfiable_dataset(spec), std::runtime_error);
}

TEST(Dataset, Deterministic) {
  const DatasetSpec spec = small_spec(30, 12, 6);
  const Dataset a = build_satisfiable_dataset(spec);
  const Dataset b = build_satisfiable_dataset(spec);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.candidates_tried, b.candidates_tried);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.instances[i].seed, b.instances[i].seed);
    EXPECT_EQ(a.instances[i].formula, b.instances[i].formula);
  }
  EXPECT_EQ(manifest_text(a), manifest_text(b));
}

TEST(Dataset, IndependentOfJobCount) {
  const DatasetSpec spec = small_spec(30, 15, 7);
  const Dataset one = build_satisfiable_dataset(spec, 1);
  const Dataset four = build_satisfiable_dataset(spec, 4);
  EXPECT_EQ(manifest_text(one), manifest_text(four));
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one.instances[i].formula, four.instances[i].formula);
}

TEST(Dataset, SaveLoadAndRegenerate) {
  DatasetSpec spec = small_spec(20, 6, 8);
  spec.filter = Filter::count_range;
  spec.lo = 1;
  spec.hi = 1000;
  const Dataset ds = build_dataset(spec);
  const fs::path dir = scratch_dir("save");
  save_dataset(ds, dir);
  EXPECT_TRUE(fs::exists(dir / "manifest"));
  EXPECT_TRUE(fs::exists(dir / "0000.cnf"));
  EXPECT_TRUE(fs::exists(dir / "0005.cnf"));

  const Dataset back = load_dataset(dir);
  ASSERT_EQ(back.size(), ds.size());
  EXPECT_EQ(back.candidates_tried, ds.candidates_tried);
  EXPECT_EQ(manifest_text(back), manifest_text(ds));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(back.instances[i].formula, ds.instances[i].formula);
    EXPECT_EQ(back.instances[i].models->count, ds.instances[i].models->count);
  }

  const fs::path again = scratch_dir("regen");
  save_dataset(regenerate_dataset(dir), again);
  for (const auto &entry : fs::directory_iterator(dir))
    EXPECT_EQ(slurp(entry.path()), slurp(again / entry.path().filename())) << entry.path();
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST(Dataset, InstanceFileCarriesSeed) {
  const Dataset ds = build_satisfiable_dataset(small_spec(20, 1, 9));
  const fs::path dir = scratch_dir("comments");
  save_dataset(ds, dir);
  std::ifstream in(dir / "0000.cnf");
  const DimacsDocument doc = read_dimacs(in);
  ASSERT_EQ(doc.comments.size(), 2u);
  EXPECT_EQ(doc.comments[1], "seed " + std::to_string(ds.instances[0].seed));
  EXPECT_EQ(doc.formula, ds.instances[0].formula);
  fs::remove_all(dir);
}

TEST(Dataset, MissingManifest) {
  EXPECT_THROW(load_dataset(scratch_dir("absent")), std::runtime_error);
}

TEST(Dataset, ColoringCertifiedByConstruction) {
  DatasetSpec spec;
  spec.family = Family::coloring;
  spec.size = 8;
  spec.colors = 4;
  spec.count = 5;
  spec.master_seed = 10;
  const Dataset ds = build_dataset(spec);
  ASSERT_EQ(ds.size(), 5u);
  EXPECT_EQ(ds.candidates_tried, 5u);
  EXPECT_TRUE(ds.certified());
  for (const auto &inst : ds.instances) {
    ASSERT_TRUE(inst.models);
    EXPECT_EQ(inst.models->count, Count{768});
    EXPECT_EQ(count_models(inst.formula).count, Count{768});
  }
}

TEST(Dataset, UnfilteredColoringWithTwoColorsIsUncertified) {
  DatasetSpec spec;
  spec.family = Family::coloring;
  spec.size = 5;
  spec.colors = 2;
  spec.count = 3;
  spec.filter = Filter::none;
  const Dataset ds = build_dataset(spec);
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_FALSE(ds.certified());
}

TEST(Dataset, NamesRoundTrip) {
  for (auto f : {Family::random3cnf, Family::coloring}) EXPECT_EQ(parse_family(to_string(f)), f);
  for (auto f : {Filter::none, Filter::satisfiable_only, Filter::count_range})
    EXPECT_EQ(parse_filter(to_string(f)), f);
  EXPECT_FALSE(parse_family("planar"));
  EXPECT_EQ(instance_filename(7), "0007.cnf");
  EXPECT_EQ(instance_filename(12345), "12345.cnf");
}
