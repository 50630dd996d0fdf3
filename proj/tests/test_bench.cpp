#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "geobundle/bench.hpp"

using namespace geobundle;
using namespace geobundle::bench;

namespace {

Instance triangle_instance() {
  const ManifoldKind kind = ManifoldKind::euclidean(2);
  std::vector<Point> pts;
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 3.0;
    Matrix c(2, 1);
    c << std::cos(a), std::sin(a);
    pts.emplace_back(kind, c);
  }
  auto prob = std::make_shared<const MedianProblem>(uniform_median(pts));
  Problem problem = make_problem(*prob, CurvatureProfile{});
  return Instance{kind, std::move(problem), prob->data[0], 1.0, std::nullopt, prob, prob};
}

ExperimentConfig triangle_config() {
  ExperimentConfig cfg;
  cfg.manifold = Geometry::euclidean;
  cfg.dim = 2;
  cfg.solvers = {"rcbm"};
  cfg.reps = 1;
  return cfg;
}

ReportRow sample_row() {
  return ReportRow{"rcbm", "hyperbolic", 2, 17, 0.012345, 1.05192, std::nullopt, "tolerance_met", 42};
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "geobundle");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(BenchRun, SymmetricTriangleMedianReachesCentroidValue) {
  const auto cells = run(triangle_config(), triangle_instance());
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].row.solver, "rcbm");
  EXPECT_TRUE(successful(cells[0].row.termination));
  // every vertex sits at distance 1 from the centroid
  EXPECT_NEAR(cells[0].row.objective, 1.0, 1e-3);
  EXPECT_GE(cells[0].row.time_sec, 0.0);
}

TEST(BenchRun, SameSeedGivesIdenticalRowsApartFromTime) {
  ExperimentConfig cfg;
  cfg.n_data = 20;
  cfg.seed = 7;
  cfg.reps = 1;
  cfg.params.max_iters = 300;
  auto a = run(cfg);
  auto b = run(cfg);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(b.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i].row.time_sec = b[i].row.time_sec = 0.0;
    EXPECT_EQ(a[i].row, b[i].row);
    EXPECT_EQ(a[i].report->trace, b[i].report->trace);
  }
  EXPECT_EQ(a[0].row.solver, "rcbm");
  EXPECT_EQ(a[1].row.solver, "sgm");
}

TEST(BenchRun, HyperbolicSolversAgree) {
  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.reps = 1;
  const auto cells = run(cfg);
  ASSERT_EQ(cells.size(), 2u);
  const double f = cells[0].row.objective;
  EXPECT_LE(std::abs(f - cells[1].row.objective), 1e-4 * (1.0 + f));
}

TEST(BenchRun, SolverFailureIsRecordedInTheRow) {
  ExperimentConfig cfg = triangle_config();
  Instance inst = triangle_instance();
  inst.problem.objective = [](const Point&) -> double { throw SolverError("boom"); };
  const auto cells = run(cfg, inst);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].row.termination, "error");
  EXPECT_FALSE(successful(cells[0].row.termination));
  EXPECT_NE(cells[0].diagnostic.find("boom"), std::string::npos);
}

TEST(BenchRun, TvRowsCarryTheError) {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::tv_denoise;
  cfg.solvers = {"sgm"};
  cfg.reps = 1;
  cfg.params.max_iters = 50;
  const auto cells = run(cfg);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_TRUE(cells[0].row.error.has_value());
  EXPECT_EQ(cells[0].row.manifold, "hyperbolic^64");
}

TEST(BenchConfig, ValidationRejectsBadConfigs) {
  ExperimentConfig cfg;
  cfg.solvers = {};
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = ExperimentConfig{};
  cfg.solvers = {"pba"};
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = ExperimentConfig{};
  cfg.dim = 0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = ExperimentConfig{};
  cfg.experiment = Experiment::tv_denoise;
  cfg.manifold = Geometry::spd;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = ExperimentConfig{};
  cfg.experiment = Experiment::procrustes;
  cfg.manifold = Geometry::special_orthogonal;
  cfg.rows = 5;
  EXPECT_THROW(cfg.validate(), ContractViolation);
}

TEST(Emit, EmptyRowsGiveHeaderOnlyCsv) {
  EXPECT_EQ(emit_string({}, Format::csv), "solver,manifold,dim,iterations,time_sec,objective,error,termination,seed\n");
}

TEST(Emit, OneRowGivesTwoLinesInHeaderOrder) {
  const auto lines = lines_of(emit_string({sample_row()}, Format::csv));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1], "rcbm,hyperbolic,2,17,0.012345,1.05192000000e+00,,tolerance_met,42");
}

TEST(Emit, ObjectiveKeepsAtLeastTenSignificantDigits) {
  ReportRow r = sample_row();
  r.objective = 1.0519212345678;
  const auto lines = lines_of(emit_string({r}, Format::csv));
  EXPECT_NE(lines[1].find("1.05192123457e+00"), std::string::npos);
  EXPECT_EQ(format_value(1.05192), "1.05192000000e+00");
}

TEST(Emit, CsvRoundTripsAtStringLevel) {
  ReportRow a = sample_row();
  ReportRow b{"sgm", "hyperbolic^64", 2, 5000, 1.5, 0.1899386303, 0.012, "iteration_cap", 18446744073709551615ull};
  const std::string text = emit_string({a, b}, Format::csv);
  const auto parsed = parse_csv(text);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(emit_string(parsed, Format::csv), text);
  EXPECT_EQ(parsed[1].seed, 18446744073709551615ull);
  EXPECT_FALSE(parsed[0].error.has_value());
  EXPECT_TRUE(parsed[1].error.has_value());
}

TEST(Emit, ParseRejectsForeignText) {
  EXPECT_THROW(parse_csv("a,b\n1,2\n"), ParseError);
  EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nrcbm,x\n"), ParseError);
  EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nrcbm,h,two,1,0.1,1,,ok,0\n"), ParseError);
}

TEST(Emit, MarkdownIsAPipeTableWithTheSameColumns) {
  const auto lines = lines_of(emit_string({sample_row()}, Format::markdown));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "| solver | manifold | dim | iterations | time_sec | objective | error | termination | seed |");
  EXPECT_EQ(lines[1].front(), '|');
  EXPECT_EQ(lines[2], "| rcbm | hyperbolic | 2 | 17 | 0.012345 | 1.05192000000e+00 |  | tolerance_met | 42 |");
}

TEST(Emit, TraceHasOneLinePerRecord) {
  ExperimentConfig cfg = triangle_config();
  const auto cells = run(cfg, triangle_instance());
  std::ostringstream os;
  emit_trace(cells, os);
  const auto lines = lines_of(os.str());
  EXPECT_EQ(lines[0], "solver,iteration,objective,g_norm,epsilon,sigma,xi,step,t");
  EXPECT_EQ(lines.size(), cells[0].report->trace.size() + 1);
}

TEST(Cli, MedianRunSucceedsAndPrintsCsv) {
  const auto r = invoke({"median", "--manifold", "hyperbolic", "--dim", "2", "--n-data", "10", "--seed", "5", "--reps",
                      "1", "--max-iters", "200"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].seed, 5u);
  EXPECT_EQ(rows[0].manifold, "hyperbolic");
}

TEST(Cli, MarkdownAndSolverSubset) {
  const auto r = invoke({"median", "--manifold", "spd", "--n-data", "5", "--solvers", "sgm", "--format", "markdown",
                      "--reps", "1", "--max-iters", "20"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[2].rfind("| sgm | spd |", 0), 0u);
}

TEST(Cli, SeedFallsBackToEnvironment) {
  ::setenv("GEOBUNDLE_SEED", "99", 1);
  const auto r = invoke({"median", "--n-data", "5", "--solvers", "rcbm", "--reps", "1", "--max-iters", "20"});
  const auto bad_env = [] {
    ::setenv("GEOBUNDLE_SEED", "nope", 1);
    return invoke({"median", "--n-data", "5", "--reps", "1"});
  }();
  ::unsetenv("GEOBUNDLE_SEED");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_csv(r.out).at(0).seed, 99u);
  EXPECT_EQ(bad_env.code, 2);
  const auto explicit_seed = invoke({"median", "--n-data", "5", "--solvers", "rcbm", "--reps", "1", "--seed", "3",
                                  "--max-iters", "20"});
  EXPECT_EQ(parse_csv(explicit_seed.out).at(0).seed, 3u);
}

TEST(Cli, BadArgumentsExitWithTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"nonsense"}).code, 2);
  EXPECT_EQ(invoke({"median", "--manifold", "torus"}).code, 2);
  EXPECT_EQ(invoke({"median", "--solvers", "rcbm,pba"}).code, 2);
  EXPECT_EQ(invoke({"median", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"median", "--dim", "0"}).code, 2);
  EXPECT_EQ(invoke({"median", "--beta", "1.5"}).code, 2);
  EXPECT_EQ(invoke({"median", "--seed", "-1"}).code, 2);
  EXPECT_EQ(invoke({"tv-denoise", "--manifold", "sphere"}).code, 2);
  EXPECT_EQ(invoke({"median", "--out", "/nonexistent-dir/x.csv", "--n-data", "3"}).code, 2);
}

TEST(Cli, HelpExitsWithZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--manifold"), std::string::npos);
}

TEST(Cli, WritesOutputAndTraceFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / "geobundle_cli_out.csv";
  const auto trace = dir / "geobundle_cli_trace.csv";
  const auto r = invoke({"median", "--manifold", "euclidean", "--dim", "2", "--n-data", "4", "--reps", "1", "--out",
                      out.string(), "--trace", trace.string(), "--max-iters", "50"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(parse_csv(ss.str()).size(), 2u);
  std::ifstream t(trace);
  std::string header;
  std::getline(t, header);
  EXPECT_EQ(header, "solver,iteration,objective,g_norm,epsilon,sigma,xi,step,t");
  std::filesystem::remove(out);
  std::filesystem::remove(trace);
}

TEST(Cli, ProcrustesTakesDimAsColumnCount) {
  const auto r = invoke({"procrustes", "--dim", "3", "--rows", "6", "--reps", "1", "--max-iters", "30"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].dim, 3);
  EXPECT_EQ(rows[0].manifold, "so");
}
