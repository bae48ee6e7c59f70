#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ame/ame.hpp"
#include "cli.hpp"
#include "support.hpp"

using namespace ame;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("amecodes_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return (path / name).string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(AmeCli, VerifySixQubitAme) {
  const CliRun r = run({"verify", test::catalog_file("ame_6_2.stabtab")});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_NE(r.out.find("AME: yes, d=4, QMDS"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("commutation: pass"), std::string::npos);
  EXPECT_NE(r.out.find("independence: pass (rank 6)"), std::string::npos);
  EXPECT_NE(r.out.find("claimed d=4: confirmed"), std::string::npos);
}

TEST(AmeCli, VerifyChildReportsCodeLine) {
  const CliRun r = run({"verify", test::catalog_file("qmds_5_1_3_2.stabtab")});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_NE(r.out.find("code: [[5,1,3]]_2, QMDS"), std::string::npos) << r.out;
}

TEST(AmeCli, VerifyBrokenCommutatorNamesPair) {
  TempDir dir("broken");
  const auto file = dir.write("bad.stabtab", "# stabtab v1\ncode n=2 q=2 k=0 d=2\ng1: x1 x1\ng2: z1 i\n");
  const CliRun r = run({"verify", file});
  EXPECT_EQ(r.code, cli::failed);
  EXPECT_NE(r.out.find("commutation: FAIL at pair (g1, g2)"), std::string::npos) << r.out;
}

TEST(AmeCli, VerifyLiteralFiveQubitTableMismatch) {
  const CliRun r = run({"verify", test::printed_file("ame_5_2.stabtab")});
  EXPECT_EQ(r.code, cli::failed);
  EXPECT_NE(r.out.find("distance: 2"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("claimed d=3: MISMATCH"), std::string::npos);
}

TEST(AmeCli, VerifyDependentGenerators) {
  TempDir dir("dep");
  const auto file = dir.write("dep.stabtab", "# stabtab v1\ncode n=2 q=2 k=0\ng1: z1 z1\ng2: z1 z1\n");
  const CliRun r = run({"verify", file});
  EXPECT_EQ(r.code, cli::failed);
  EXPECT_NE(r.out.find("independence: FAIL (rank 1)"), std::string::npos) << r.out;
}

TEST(AmeCli, GfFourWarnsAboutSingleSiteCommutation) {
  TempDir dir("gf4");
  const auto file = dir.write("gf4.stabtab", "# stabtab v1\ncode n=2 q=4 k=0\nmodulus: 1,1,1\ng1: x1 x1\ng2: x2 x2\ng3: z1 z1\ng4: z2 z2\n");
  const CliRun r = run({"verify", file});
  EXPECT_EQ(r.code, cli::ok) << r.out << r.err;
  EXPECT_NE(r.err.find("warning: X and Z commute"), std::string::npos) << r.err;
}

TEST(AmeCli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, cli::usage);
  EXPECT_EQ(run({"bogus"}).code, cli::usage);
  EXPECT_EQ(run({"verify"}).code, cli::usage);
  EXPECT_EQ(run({"verify", "/nonexistent/file.stabtab"}).code, cli::usage);
  EXPECT_EQ(run({"rate", "--n", "5"}).code, cli::usage);
  EXPECT_EQ(run({"rate", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--latt", "-1"}).code, cli::usage);
  EXPECT_EQ(run({"rate", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--format", "xml"}).code, cli::usage);
  EXPECT_EQ(run({"catalog", "show"}).code, cli::usage);
  EXPECT_EQ(run({"catalog", "show", "no_such_entry"}).code, cli::usage);
  EXPECT_EQ(run({"catalog", "purge"}).code, cli::usage);
}

TEST(AmeCli, ParseErrorCarriesLine) {
  TempDir dir("parse");
  const auto file = dir.write("p.stabtab", "# stabtab v1\ncode n=2 q=2 k=0\ng1: z1 q7\n");
  const CliRun r = run({"verify", file});
  EXPECT_EQ(r.code, cli::usage);
  EXPECT_NE(r.err.find("p.stabtab:3:"), std::string::npos) << r.err;
}

TEST(AmeCli, TinyBudgetExitsThree) {
  const CliRun r = run({"verify", test::catalog_file("ame_6_2.stabtab"), "--budget", "10"});
  EXPECT_EQ(r.code, cli::resource);
  EXPECT_NE(r.err.find("budget exceeded"), std::string::npos) << r.err;
}

TEST(AmeCli, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, cli::ok);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST(AmeCli, ChildrenWritesOneFilePerK) {
  TempDir dir("children");
  const CliRun r = run({"children", test::catalog_file("ame_6_2.stabtab"), "--outdir", dir.path.string()});
  EXPECT_EQ(r.code, cli::ok) << r.out << r.err;
  const auto a = dir.path / "qmds_5_1_3_2.stabtab";
  const auto b = dir.path / "qmds_4_2_2_2.stabtab";
  ASSERT_TRUE(fs::exists(a));
  ASSERT_TRUE(fs::exists(b));
  EXPECT_EQ(std::distance(fs::directory_iterator(dir.path), fs::directory_iterator{}), 2);
  const auto ta = read_stabtab(a.string());
  const auto tb = read_stabtab(b.string());
  EXPECT_EQ(ta.label(), "[[5,1,3]]_2");
  EXPECT_EQ(tb.label(), "[[4,2,2]]_2");
  EXPECT_EQ(ta.gens, test::catalog_table("qmds_5_1_3_2").gens);
  EXPECT_EQ(tb.gens, test::catalog_table("qmds_4_2_2_2").gens);
  EXPECT_NE(r.out.find("[[5,1,3]]_2 -> "), std::string::npos);
  EXPECT_NE(r.out.find("distance 3, QMDS"), std::string::npos) << r.out;
}

TEST(AmeCli, ReduceFixedPointRoundTrips) {
  TempDir dir("reduce");
  const auto file = test::catalog_file("ame_6_2.stabtab");
  const CliRun stdout_run = run({"reduce", file});
  EXPECT_EQ(stdout_run.code, cli::ok);
  EXPECT_EQ(parse_stabtab(stdout_run.out).gens, test::catalog_table("ame_6_2").gens);
  const auto out = (dir.path / "r.stabtab").string();
  const CliRun file_run = run({"reduce", file, "--out", out});
  EXPECT_EQ(file_run.code, cli::ok);
  EXPECT_EQ(slurp(out), stdout_run.out);
  EXPECT_NE(file_run.out.find("block width 3"), std::string::npos) << file_run.out;
}

TEST(AmeCli, OracleOnStateFile) {
  const CliRun r = run({"oracle", test::catalog_file("ame_4_3.state"), "--message-sites", "1"});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_NE(r.out.find("codewords: 3 projections"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Knill-Laflamme at d=2: pass"), std::string::npos);
  EXPECT_NE(r.out.find("entropy |A|=1: min 1.584962501"), std::string::npos);
  EXPECT_NE(r.out.find("dense distance: 2"), std::string::npos);

  const CliRun fail = run({"oracle", test::catalog_file("ame_4_3.state"), "--message-sites", "1", "--kl-d", "3"});
  EXPECT_EQ(fail.code, cli::failed);
  EXPECT_NE(fail.out.find("FAIL (witness"), std::string::npos) << fail.out;
  EXPECT_NE(fail.out.find("weight 2)"), std::string::npos);
}

TEST(AmeCli, OracleOnStabtab) {
  const CliRun r = run({"oracle", test::catalog_file("ame_6_2.stabtab")});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_NE(r.out.find("joint eigenspace of dimension 1"), std::string::npos);
  EXPECT_NE(r.out.find("entropy |A|=3: min 3 max 3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("dense distance: 4"), std::string::npos);
}

TEST(AmeCli, RateCsvSchema) {
  TempDir dir("rate");
  const auto csv = (dir.path / "rate.csv").string();
  const CliRun r = run({"rate", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--ltot", "100,1000", "--l0", "1", "--csv",
                     csv, "--format", "csv"});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_EQ(r.out, slurp(csv));
  EXPECT_EQ(r.out.rfind("l_tot_km,code,l0_km,r,p_success,rate_t0\n", 0), 0u);
  EXPECT_EQ(count_lines(r.out), 3);
  EXPECT_NE(r.out.find("100,[[5,1,3]]_2,1,100,"), std::string::npos) << r.out;
  EXPECT_EQ(run({"rate", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--ltot", "10", "--l0", "3"}).code, cli::usage);
  EXPECT_EQ(run({"rate", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--optimize"}).code, cli::ok);
}

TEST(AmeCli, CostCsvMatchesLibrary) {
  const CliRun r = run({"cost", "--n", "5", "--k", "1", "--d", "3", "--q", "2", "--ltot", "1000", "--format", "csv"});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_EQ(r.out.rfind("l_tot_km,code,grid,c_st,c_lt,l0_km,r\n", 0), 0u);
  const CostResult st = cost_short_term({5, 1, 3, 2}, 1000);
  std::ostringstream v;
  v << std::setprecision(12) << st.value;
  EXPECT_NE(r.out.find("1000,[[5,1,3]]_2,integer-r," + v.str() + ","), std::string::npos) << r.out << v.str();
  EXPECT_EQ(run({"cost", "--n", "5", "--k", "0", "--d", "3", "--q", "2"}).code, cli::usage);
}

TEST(AmeCli, TableCsv) {
  const CliRun r = run({"table", "--ltot", "1000", "--format", "csv"});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  EXPECT_EQ(r.out.rfind("n,q,existence,k_1000km\n", 0), 0u) << r.out;
  EXPECT_EQ(count_lines(r.out), 1 + 11 * 7);
  EXPECT_NE(r.out.find("\n5,2,exists,1\n"), std::string::npos);
  EXPECT_NE(r.out.find("\n4,2,not-exists,\n"), std::string::npos);
  EXPECT_NE(r.out.find("\n14,7,exists,3\n"), std::string::npos);
}

TEST(AmeCli, FigureCsv) {
  TempDir dir("figure");
  const auto csv = (dir.path / "fig.csv").string();
  const CliRun r = run({"figure", "--n", "6", "--q", "2", "--code", "7,1,3,2", "--ltot", "100,1000", "--csv", csv});
  EXPECT_EQ(r.code, cli::ok) << r.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("l_tot_km,code,rate_t0_l0_1km,c_st,c_st_l0_km\n", 0), 0u);
  EXPECT_EQ(count_lines(text), 1 + 2 * 3);
  EXPECT_NE(text.find("1000,[[7,1,3]]_2,"), std::string::npos);
  EXPECT_EQ(run({"figure"}).code, cli::usage);
}

TEST(AmeCli, CatalogListShowGrid) {
  const CliRun list = run({"catalog", "list"});
  EXPECT_EQ(list.code, cli::ok) << list.err;
  EXPECT_NE(list.out.find("ame_6_2"), std::string::npos);
  EXPECT_NE(list.out.find("11 entries"), std::string::npos) << list.out;

  const CliRun show = run({"catalog", "show", "qmds_5_1_3_9"});
  EXPECT_EQ(show.code, cli::ok) << show.err;
  EXPECT_NE(show.out.find("params: [[5,1,3]]_9"), std::string::npos);
  EXPECT_NE(show.out.find("source: printed"), std::string::npos);

  const CliRun grid = run({"catalog", "grid"});
  EXPECT_EQ(grid.code, cli::ok);
  EXPECT_EQ(count_lines(grid.out), 12);
  EXPECT_NE(grid.out.find("   4   -   E   E   E   ?   E   E"), std::string::npos) << grid.out;
}

TEST(AmeCli, CatalogVerificationFailureExitsOne) {
  TempDir dir("badcat");
  dir.write("index.toml", "entry.t.file = \"t.stabtab\"\n");
  dir.write("t.stabtab", "# stabtab v1\ncode n=2 q=2 k=0 d=2\ng1: x1 x1\ng2: z1 i\n");
  const CliRun r = run({"catalog", "list", "--catalog", dir.path.string()});
  EXPECT_EQ(r.code, cli::failed);
  EXPECT_NE(r.err.find("commutation fails for g1, g2"), std::string::npos) << r.err;
}

TEST(AmeCli, DeterministicAcrossJobs) {
  const auto file = test::catalog_file("ame_6_2.stabtab");
  const CliRun one = run({"verify", file, "--jobs", "1"});
  const CliRun four = run({"verify", file, "--jobs", "4"});
  EXPECT_EQ(one.code, four.code);
  EXPECT_EQ(one.out, four.out);
  const auto lit = test::printed_file("ame_5_2.stabtab");
  EXPECT_EQ(run({"verify", lit, "--jobs", "1"}).out, run({"verify", lit, "--jobs", "3"}).out);
  EXPECT_EQ(run({"verify", file, "--jobs", "0"}).code, cli::usage);
}
