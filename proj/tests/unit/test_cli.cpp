#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "lriga/errors.hpp"
#include "lriga/ttb_io.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace lriga::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lriga_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(LRIGA_TOOL_PATH) + " " + args + " > " + scratch("stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

GeometrySource builtin(const std::string& name) {
  GeometrySource g;
  g.builtin = name;
  return g;
}

}  // namespace

TEST(Report, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Report, FixedColumnsAndCrlf) {
  RunReport r;
  ReportRow row;
  row.set("command", std::string("assemble"));
  row.set("level", 2LL);
  row.set("tol", 1e-7);
  row.set("rank_omega", std::string("(1,1)"));
  r.rows.push_back(row);
  std::ostringstream os;
  r.write_csv(os);
  const std::string csv = os.str();
  const auto eol = csv.find("\r\n");
  ASSERT_NE(eol, std::string::npos);
  EXPECT_EQ(csv.substr(0, eol).rfind("command,geometry,level,", 0), 0u);
  EXPECT_NE(csv.find("assemble,,2,"), std::string::npos);
  EXPECT_NE(csv.find("1e-07"), std::string::npos);
  EXPECT_NE(csv.find("\"(1,1)\""), std::string::npos);
  EXPECT_THROW(row.set("no_such_column", 1.0), lriga::ValidationError);
  EXPECT_THROW(row.set("tol", std::numeric_limits<double>::quiet_NaN()), lriga::ValidationError);
}

TEST(Commands, SolutionSpaceLevels) {
  const auto geo = builtin("unit_cube").load();
  EXPECT_EQ(solution_space(geo, 0).factor(0).size(), 3u);
  EXPECT_EQ(solution_space(geo, 3).factor(2).size(), 15u);
}

TEST(Commands, RanksOfTheAnnulus) {
  RankOptions opt;
  opt.geometry = builtin("quarter_annulus_3d");
  opt.level = 1;
  opt.tols = {1e-7};
  const auto table = cmd_ranks(opt);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.headers.size(), 7u);
  for (const auto& r : table.rows[0].ranks) EXPECT_EQ(r, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(table.rows[0].stiffness_terms, 9u);
  EXPECT_EQ(table.rows[0].mass_terms, 1u);
  EXPECT_NE(table.format().find("(1,1)"), std::string::npos);
}

TEST(Commands, AssembleReportsDenseDifference) {
  AssembleOptions opt;
  opt.geometry = builtin("unit_cube");
  opt.max_level = 1;
  opt.tols = {1e-7, 1e-10};
  opt.compare_dense = true;
  const auto r = cmd_assemble(opt);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_LE(std::stod(r.rows[1].get("diff_stiffness")), 1e-12);
  EXPECT_EQ(r.rows[0].get("dofs_per_dim"), "7");
}

TEST(Commands, AssembleRefusesAboveCap) {
  AssembleOptions opt;
  opt.geometry = builtin("unit_cube");
  opt.max_level = 2;
  opt.compare_dense = true;
  opt.dense_row_cap = 1000;
  EXPECT_THROW((void)cmd_assemble(opt), lriga::SizeCapError);
}

TEST(Commands, ZeroDesiredStateGivesZeroSolution) {
  SolveOptions opt;
  opt.geometry = builtin("unit_cube");
  opt.level = 0;
  opt.steps = 2;
  opt.yhat = "zero";
  const auto out = cmd_solve_control(opt);
  EXPECT_TRUE(out.result.converged);
  EXPECT_EQ(out.report.rows.at(0).get("control_norm"), "0");
}

TEST(Commands, SolutionFileRoundTrip) {
  const auto path = scratch("solution.ttb");
  SolveOptions opt;
  opt.geometry = builtin("quarter_annulus_3d");
  opt.level = 0;
  opt.steps = 2;
  opt.solution_out = path;
  const auto out = cmd_solve_control(opt);
  ASSERT_TRUE(out.result.converged);
  const auto back = std::get<lriga::BlockTt>(lriga::read_ttb(path));
  EXPECT_EQ(back.components(), 3u);
  const auto again = scratch("solution2.ttb");
  lriga::write_ttb(again, back);
  EXPECT_EQ(slurp(path), slurp(again));
}

TEST(Commands, GenerateWritesParsableJson) {
  const auto path = scratch("annulus.json");
  cmd_generate("quarter_annulus_3d", 3, path);
  GeometrySource g;
  g.file = path;
  EXPECT_EQ(g.load().space().factor(1).degree(), 3);
}

TEST(Executable, ExitCodes) {
  EXPECT_EQ(run_tool("--help"), 0);
  EXPECT_EQ(run_tool("assemble --builtin nowhere"), 2);
  EXPECT_EQ(run_tool("assemble --builtin unit_cube --tol abc"), 2);
  EXPECT_EQ(run_tool("solve-control --builtin unit_cube --refine 0 --nt 2 --tol 2"), 2);
  EXPECT_EQ(run_tool("generate unit_cube"), 2);
  const auto out = scratch("cube.csv");
  EXPECT_EQ(run_tool("assemble --builtin unit_cube --refine 1 --out " + out.string()), 0);
  EXPECT_EQ(slurp(out).rfind("command,", 0), 0u);
}
