#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fxt_mvi/bench.hpp"
#include "fxt_mvi/cli.hpp"

using namespace fxt_mvi;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fxt-mvi");
  std::ostringstream out, err;
  const int code = cli::parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

std::filesystem::path write_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(CliBounds, Example1PrintsCertificate) {
  const Result r = run({"bounds", "--preset", "example1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "lambda_window"), "(0, 0.88)");
  EXPECT_EQ(value_of(r.out, "k_star"), "6829");
  EXPECT_FALSE(value_of(r.out, "c").empty());
  EXPECT_FALSE(value_of(r.out, "eps_c").empty());
  EXPECT_FALSE(value_of(r.out, "t_bar").empty());
  EXPECT_EQ(value_of(r.out, "alpha1_window_lower"), "0");
  EXPECT_EQ(value_of(r.out, "uncertified_alpha1"), "false");
}

TEST(CliBounds, Example2FlagsUncertifiedAlpha) {
  const Result r = run({"bounds", "--preset", "example2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(value_of(r.out, "flag"), "uncertified_alpha1");
  EXPECT_EQ(value_of(r.out, "stated_t_bar"), "8.0600000000000005");
  EXPECT_NE(r.err.find("uncertified_alpha1"), std::string::npos);
}

TEST(CliBounds, LambdaOutsideWindow) {
  const Result r = run({"bounds", "--mu", "11", "--L", "5", "--lambda", "0.9"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("lambda outside (0, 0.88)"), std::string::npos);
}

TEST(CliBounds, CustomConstantsWithoutPreset) {
  const Result r = run({"bounds", "--mu", "11", "--L", "5", "--lambda", "0.44", "--monotonicity",
                        "pseudo", "--xi", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "k_star"), "6829");
  const Result strong = run({"bounds", "--mu", "11", "--L", "5", "--lambda", "0.44"});
  EXPECT_EQ(strong.code, 1);
}

TEST(CliBounds, MissingConstants) {
  const Result r = run({"bounds", "--lambda", "0.1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing_certificates"), std::string::npos);
}

TEST(CliBounds, EstimatedConstantsWarn) {
  const Result r = run({"bounds", "--preset", "example2", "--estimate-constants"});
  EXPECT_EQ(value_of(r.out, "estimated_constants"), "true");
  EXPECT_NE(r.err.find("sampled estimates"), std::string::npos);
}

TEST(CliParse, UnknownVerbAndFlag) {
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"bounds", "--bogus", "1"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliParse, XiAndAlphaAreExclusive) {
  const Result r = run({"bounds", "--preset", "example1", "--xi", "10", "--alpha1", "0.8"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("mutually exclusive"), std::string::npos);
}

TEST(CliParse, BadNumberNamesField) {
  const Result r = run({"bounds", "--preset", "example1", "--eta", "abc"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'eta'"), std::string::npos);
}

TEST(CliConfig, MalformedFileReportsLine) {
  const auto p = write_file("fxt_mvi_bad.cfg", "preset = example1\n# note\nkappa1 20\n");
  const Result r = run({"bounds", "--config", p.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":3:"), std::string::npos);
  const auto q = write_file("fxt_mvi_unknown.cfg", "preset = example1\ncolour = red\n");
  const Result s = run({"bounds", "--config", q.string()});
  EXPECT_EQ(s.code, 1);
  EXPECT_NE(s.err.find("colour"), std::string::npos);
  EXPECT_EQ(run({"bounds", "--config", "/nonexistent.cfg"}).code, 1);
}

TEST(CliConfig, ThreeLayerPrecedence) {
  // preset: kappa1 = 20, kappa2 = 20, lambda = 0.44
  // config: kappa1 = 30, kappa2 = 35
  // command line: kappa2 = 40
  const auto p = write_file("fxt_mvi_layers.cfg", "preset = example1\nkappa1 = 30\nkappa2 = 35\nrecord_every = 10\n");
  const Result r = run({"bounds", "--config", p.string(), "--kappa2", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "lambda"), "0.44");
  EXPECT_EQ(value_of(r.out, "kappa1"), "30");
  EXPECT_EQ(value_of(r.out, "kappa2"), "40");
}

TEST(CliConfig, HigherLayerXiOverridesConfigAlphas) {
  const auto p = write_file("fxt_mvi_alpha.cfg", "preset = example1\nalpha1 = 0.9\nalpha2 = 1.1\n");
  const Result r = run({"bounds", "--config", p.string(), "--xi", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "alpha1"), "0.5");
  const Result cfg_only = run({"bounds", "--config", p.string()});
  EXPECT_EQ(value_of(cfg_only.out, "alpha1"), "0.90000000000000002");
}

TEST(CliRun, Example2FromOriginHasMonotoneError) {
  const auto dir = std::filesystem::temp_directory_path() / "fxt_mvi_cli_run2";
  std::filesystem::remove_all(dir);
  const Result r = run({"run", "--preset", "example2", "--x0", "0,0,0", "--out", dir.string(),
                        "--record-every", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("uncertified_alpha1"), std::string::npos);
  const auto rows = parse_csv(dir / "example2_x0-0.csv");
  ASSERT_GT(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_LE(*rows[i].error, *rows[i - 1].error + 1e-12) << "row " << i;
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "example2_x0-0.meta"));
  std::filesystem::remove_all(dir);
}

TEST(CliRun, DeterministicOutputs) {
  const auto a = std::filesystem::temp_directory_path() / "fxt_mvi_det_a";
  const auto b = std::filesystem::temp_directory_path() / "fxt_mvi_det_b";
  for (const auto& d : {a, b}) {
    std::filesystem::remove_all(d);
    ASSERT_EQ(run({"run", "--preset", "example1", "--samples", "2", "--seed", "7", "--out",
                   d.string()})
                  .code,
              0);
  }
  for (const char* f : {"example1_x0-0.csv", "example1_x0-0.meta", "example1_x0-1.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(CliRun, OutputDirFromEnvironment) {
  const auto dir = std::filesystem::temp_directory_path() / "fxt_mvi_env_out";
  std::filesystem::remove_all(dir);
  ::setenv("FXT_MVI_OUT_DIR", dir.c_str(), 1);
  const Result r = run({"run", "--preset", "example1", "--x0", "1,1"});
  ::unsetenv("FXT_MVI_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "example1_x0-0.csv"));
  std::filesystem::remove_all(dir);
}

TEST(CliRun, ValidationErrors) {
  EXPECT_EQ(run({"run", "--preset", "example1", "--x0", "1,2,3"}).code, 1);
  EXPECT_EQ(run({"run", "--preset", "example1", "--lambda", "0.95"}).code, 1);
  EXPECT_EQ(run({"sweep", "--preset", "example1"}).code, 1);
  EXPECT_EQ(run({"run", "--preset", "example1", "--sweep", "zeta=1"}).code, 1);
}

TEST(CliRun, DivergenceIsRuntimeFailure) {
  const auto dir = std::filesystem::temp_directory_path() / "fxt_mvi_diverge";
  const Result r = run({"run", "--preset", "example1", "--eta", "1e6", "--max-steps", "100",
                        "--x0", "10,10", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("non_finite"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(CliSweep, EtaSweepWritesOneFilePerValue) {
  const auto dir = std::filesystem::temp_directory_path() / "fxt_mvi_cli_sweep";
  std::filesystem::remove_all(dir);
  const Result r = run({"sweep", "--preset", "example1", "--x0", "0,0", "--sweep",
                        "eta=1e-3,1e-4", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "example1_eta-0.001_x0-0.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "example1_eta-0.0001_x0-0.csv"));
  std::filesystem::remove_all(dir);
}

TEST(CliGenData, WritesLoadableDataset) {
  const auto dir = std::filesystem::temp_directory_path() / "fxt_mvi_gen";
  std::filesystem::remove_all(dir);
  const Result r = run({"gen-data", "--seed", "3", "--n", "10", "--d", "2", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset d = load_dataset(dir / "dataset_seed-3_n-10_d-2.txt");
  EXPECT_EQ(d.labels, generate_dataset(3, 10, 2).labels);
  std::filesystem::remove_all(dir);
}

TEST(CliVerify, AllPropertiesPass) {
  const Result r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
