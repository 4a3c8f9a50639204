#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gsat/gsat.hpp"
#include "oracles.hpp"

using namespace gsat;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("gsat_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CliResult gsat_cli(const std::string &args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string("'") + GSAT_CLI_PATH + "' " + args + " 2>'" + err.string() + "'";
  CliResult r;
  FILE *pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err);
  return r;
}

fs::path write_cnf(const std::string &name, const Formula &f) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  write_dimacs(out, f);
  return p;
}

std::string q(const fs::path &p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, CountTriangleColorings) {
  const auto path = write_cnf("k3.cnf", encode_coloring(complete_graph(3), 3).formula);
  const CliResult r = gsat_cli("count --cap 10 " + q(path));
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "6 exact\n");
  const CliResult capped = gsat_cli("count --cap 4 " + q(path));
  EXPECT_EQ(capped.status, 0);
  EXPECT_EQ(capped.out, ">4 capped\n");
  EXPECT_EQ(gsat_cli("count --no-cap " + q(path)).out, "6 exact\n");
}

TEST(Cli, WalksatGivesUpWithoutFlips) {
  // pick a formula that the replayed initial assignment falsifies
  Rng probe(try_seed(7, 0));
  const Assignment initial = random_assignment(5, probe);
  const Literal falsified = initial.value(1) ? Literal::negative(1) : Literal::positive(1);
  const Formula f(5, std::vector<std::vector<Literal>>{{falsified}});
  const auto path = write_cnf("giveup.cnf", f);
  const CliResult r = gsat_cli("walksat --mf 0 --mt 1 --seed 7 " + q(path));
  EXPECT_EQ(r.status, 1) << r.err;
  EXPECT_EQ(r.out, "GIVEUP\n");
  EXPECT_NE(r.err.find("flips=0"), std::string::npos);
}

TEST(Cli, WalksatFindsModel) {
  Rng rng(3);
  Formula f = random_3cnf(30, 3.0, rng);
  ASSERT_TRUE(decide_sat(f));
  const auto path = write_cnf("easy.cnf", f);
  const CliResult r = gsat_cli("walksat --mf 1000 --mt 20 --seed 1 " + q(path));
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream lines(r.out);
  std::string verdict, vline;
  std::getline(lines, verdict);
  std::getline(lines, vline);
  EXPECT_EQ(verdict, "SAT");
  std::istringstream lits(vline);
  std::string tag;
  lits >> tag;
  EXPECT_EQ(tag, "v");
  Assignment a(30);
  int lit;
  while (lits >> lit && lit != 0) a.set(static_cast<Var>(std::abs(lit)), lit > 0);
  EXPECT_EQ(lit, 0);
  EXPECT_TRUE(is_satisfying(f, a));
  EXPECT_EQ(oracle::unsat_count(f, oracle::values_of(a)), 0u);
}

TEST(Cli, IdenticalArgumentsIdenticalOutput) {
  Rng rng(4);
  const auto path = write_cnf("det.cnf", random_3cnf(40, 4.25, rng));
  const std::string args = "walksat --mf 200 --mt 5 --seed 99 --strategy gsat-walk " + q(path);
  const CliResult a = gsat_cli(args);
  const CliResult b = gsat_cli(args);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(gsat_cli("gen3cnf --vars 20 --seed 5").out, gsat_cli("gen3cnf --vars 20 --seed 5").out);
}

TEST(Cli, MissingFileIsInputError) {
  const std::string missing = (scratch() / "nope.cnf").string();
  const CliResult r = gsat_cli("solve " + q(missing));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find(missing), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(gsat_cli("solve --frobnicate x").status, 2);
  EXPECT_EQ(gsat_cli("").status, 2);
  EXPECT_EQ(gsat_cli("walksat --strategy tabu x.cnf").status, 2);
  EXPECT_EQ(gsat_cli("gen3cnf --vars 2").status, 2);
}

TEST(Cli, MalformedCnfIsInputError) {
  const fs::path p = scratch() / "bad.cnf";
  std::ofstream(p) << "p cnf 2 1\n1 3 0\n";
  const CliResult r = gsat_cli("solve " + q(p));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, SolveVerdicts) {
  const auto sat = write_cnf("sat.cnf", Formula(2, {{1, 2}, {-1}}));
  const CliResult r = gsat_cli("solve " + q(sat));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "SAT\nv -1 2 0\n");
  const auto unsat = write_cnf("unsat.cnf", Formula(1, {{1}, {-1}}));
  const CliResult u = gsat_cli("solve " + q(unsat));
  EXPECT_EQ(u.status, 1);
  EXPECT_EQ(u.out, "UNSAT\n");
}

TEST(Cli, StdinInput) {
  const auto path = write_cnf("stdin.cnf", Formula(3, {{1, 2, 3}}));
  const CliResult r = gsat_cli("count - < " + q(path));
  EXPECT_EQ(r.out, "7 exact\n");
}

TEST(Cli, DefaultSeedNotice) {
  const CliResult r = gsat_cli("gen3cnf --vars 10");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.err.find("seed defaulted to 0"), std::string::npos);
  const CliResult s = gsat_cli("gen3cnf --vars 10 --seed 0");
  EXPECT_EQ(s.err.find("seed defaulted"), std::string::npos);
  EXPECT_EQ(r.out, s.out);
  const Formula f = parse_dimacs(r.out);
  Rng rng(0);
  EXPECT_EQ(f, random_3cnf(10, 4.25, rng));
}

TEST(Cli, GraphAndEncoding) {
  const fs::path g = scratch() / "tree.graph";
  ASSERT_EQ(gsat_cli("gen2tree --vertices 7 --seed 3 --out " + q(g)).status, 0);
  const fs::path cnf = scratch() / "tree.cnf";
  ASSERT_EQ(gsat_cli("encode-color --colors 4 --graph " + q(g) + " --out " + q(cnf)).status, 0);
  EXPECT_EQ(gsat_cli("count " + q(cnf)).out, "384 exact\n");
  EXPECT_EQ(gsat_cli("encode-color --colors 3").status, 2);
}

TEST(Cli, DatasetGridTaPipeline) {
  const fs::path ds = scratch() / "ds";
  const CliResult build = gsat_cli("dataset --size 20 --count 12 --seed 2 --out " + q(ds));
  ASSERT_EQ(build.status, 0) << build.err;
  EXPECT_TRUE(fs::exists(ds / "manifest"));
  EXPECT_TRUE(fs::exists(ds / "0011.cnf"));

  const std::string grid_args = "grid --dataset " + q(ds) + " --mf 20,100 --mt 1,5 --no-timing --seed 1";
  const CliResult g1 = gsat_cli(grid_args + " --out " + q(scratch() / "g1"));
  ASSERT_EQ(g1.status, 0) << g1.err;
  const CliResult g2 = gsat_cli("--jobs 3 " + grid_args);
  EXPECT_EQ(g1.out, g2.out);
  EXPECT_EQ(slurp(scratch() / "g1" / "grid.csv"), g1.out);
  EXPECT_EQ(g1.out.substr(0, g1.out.find('\n')), "mf,mt,n,accuracy,mean_flips,mean_time");

  const CliResult ta = gsat_cli("ta --accuracy 0.9 --table " + q(scratch() / "g1" / "grid.csv"));
  ASSERT_EQ(ta.status, 0) << ta.err;
  EXPECT_EQ(ta.out.rfind("t_a_flips=", 0), 0u) << ta.out;
  const CliResult direct = gsat_cli("ta --accuracy 0.9 --dataset " + q(ds) + " --mf 20,100 --mt 1,5 --no-timing --seed 1");
  EXPECT_EQ(direct.out, ta.out);

  const CliResult unreachable = gsat_cli("ta --accuracy 1 --dataset " + q(ds) + " --mf 1 --mt 1 --seed 1");
  EXPECT_EQ(unreachable.status, 1);
  EXPECT_EQ(unreachable.out, "UNREACHABLE\n");
}

TEST(Cli, Scale) {
  const fs::path out = scratch() / "scale";
  const CliResult r = gsat_cli("scale --sizes 20,15 --accuracy 0.9 --count 10 --mf 50,400 --mt 1,10 --no-timing --seed 3 --out " +
                         q(out));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(out / "scaling.csv"), r.out);
  EXPECT_TRUE(fs::exists(out / "scaling.dat"));
  EXPECT_TRUE(fs::exists(out / "grid_15.csv"));
  EXPECT_TRUE(fs::exists(out / "grid_20.csv"));
  std::istringstream lines(r.out);
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(first.rfind("15,", 0), 0u);
  EXPECT_EQ(second.rfind("20,", 0), 0u);
}

TEST(Cli, GridRefusesUncertifiedDataset) {
  const fs::path ds = scratch() / "raw";
  ASSERT_EQ(gsat_cli("dataset --size 20 --count 3 --filter none --ratio 6 --seed 1 --out " + q(ds)).status, 0);
  const CliResult r = gsat_cli("grid --dataset " + q(ds) + " --mf 10 --mt 1");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("not certified"), std::string::npos);
}
