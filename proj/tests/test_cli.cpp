#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct Run {
  int status;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const auto dir = fs::temp_directory_path() / "wtl_cli_test" / (std::to_string(::getpid()) + "_" + info->name());
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto dir = scratch_dir();
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(WTL_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return {status, slurp(out), slurp(err)};
}

std::string body(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.rfind("# ", 0) != 0) out += line + "\n";
  return out;
}

} // namespace

TEST(Cli, WidthsRows) {
  auto r = run("widths --family geometric --omega 0.25 --count 4");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(body(r.out), "index,value\n0,1.0000000000000000e+00\n1,5.0000000000000000e-01\n"
                         "2,2.5000000000000000e-01\n3,1.2500000000000000e-01\n");
  r = run("widths --omega 0.5 --d 2 --count 3");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("1,7.0710678118654757e-01\n2,7.0710678118654757e-01"), std::string::npos);
  r = run("widths --count 1");
  EXPECT_EQ(body(r.out), "index,value\n0,1.0000000000000000e+00\n");
  r = run("widths --omega 1.5");
  EXPECT_NE(r.status, 0);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, TransferTable) {
  auto r = run("transfer --A 1 --B 1 --b 1 --eps-grid e^-1..e^-5");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\"n_std_bound\": 44.0"), std::string::npos);
  EXPECT_NE(r.out.find("\"n0\": 2.5"), std::string::npos);
  r = run("transfer --A 1 --B 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("idealized"), std::string::npos);
  EXPECT_NE(r.out.find("(default) b=1"), std::string::npos);
}

TEST(Cli, TransferCsv) {
  const auto path = scratch_dir() / "bounds.csv";
  auto r = run("transfer --A 1 --B 1 --eps-grid e^-1,e^-3 --csv " + path.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto csv = slurp(path);
  EXPECT_EQ(csv.rfind("# wtl transfer", 0), 0u);
  EXPECT_NE(csv.find("epsilon,ln_inv_epsilon,n_std_bound,n_std_bound_real,n_all_bound\n"), std::string::npos);
  EXPECT_NE(csv.find(",4.4000000000000000e+01,"), std::string::npos);
  EXPECT_NE(csv.find(",8.7000000000000000e+01,"), std::string::npos);
}

TEST(Cli, TransferThresholdError) {
  const auto r = run("transfer --c 1 --t 1 --d 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("(e + 1/c)^{1/t}/e = 1.3678794411714423"), std::string::npos);
}

TEST(Cli, SampleDeterministicAndFloor) {
  const std::string args = "sample --omega 0.25 --n-grid 4,8,16 --trials 5 --seed 9";
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream is(body(a.out));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,median_error,best_error,floor_sigma,ceiling_bound,m,truncation_remainder");
  int rows = 0;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    EXPECT_GE(v[2], v[3] - 1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, SampleSingularity) {
  const auto r = run("sample --omega 0.25 --n-grid 4 --m 8");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("singular"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, OutputFileOnlyOnSuccess) {
  const auto path = scratch_dir() / "fail.csv";
  fs::remove(path);
  run("sample --omega 0.25 --n-grid 4 --m 8 --out " + path.string());
  EXPECT_FALSE(fs::exists(path));
}

TEST(Cli, HeaderReproducesOutput) {
  const auto dir = scratch_dir();
  const auto first = dir / "first.csv";
  auto r = run("sample --omega 0.3 --n-grid 6,12 --trials 3 --seed 123 --out " + first.string());
  ASSERT_EQ(r.status, 0) << r.err;
  // Explicit settings from the header become a config file; defaults are implied.
  std::istringstream is(slurp(first));
  std::ofstream cfg(dir / "rerun.ini");
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line) && line.rfind("# ", 0) == 0)
    if (line.find("(default)") == std::string::npos && line.find("out=") == std::string::npos)
      cfg << line.substr(2) << '\n';
  cfg.close();
  const auto second = dir / "second.csv";
  r = run("sample --config " + (dir / "rerun.ini").string() + " --out " + second.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto a = slurp(first), b = slurp(second);
  EXPECT_EQ(body(a), body(b));
  EXPECT_NE(a.find("seed=\"123\""), std::string::npos);
}

TEST(Cli, Classify) {
  auto r = run("classify --form constant --A 5 --B 2");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\"class\": \"EXP-SPT\""), std::string::npos);
  r = run("classify --form poly --c 3 --q 2 --p 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"class\": \"EXP-PT\""), std::string::npos);
  EXPECT_NE(r.out.find("\"EXP-QPT\",\n    \"EXP-UWT\",\n    \"EXP-WT\""), std::string::npos);
  r = run("classify --form quasi --c 1 --t 1 --uwt 1 --std");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("decreasing-to-zero trend"), std::string::npos);
  r = run("classify --form nonsense");
  EXPECT_EQ(r.status, 1);
}

TEST(Cli, ClassifyData) {
  const auto path = scratch_dir() / "data.csv";
  {
    std::ofstream f(path);
    f << "d,ln_inv_epsilon,n\n";
    for (int d = 1; d <= 6; ++d)
      for (int k = 1; k <= 6; ++k) f << d << ',' << k << ',' << 3.0 * d * d * std::pow(1.0 + k, 1.5) << '\n';
  }
  const auto r = run("classify --form data --data " + path.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\"class\": \"EXP-PT\""), std::string::npos);
}

TEST(Cli, Verify) {
  auto r = run("verify");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out, run("verify").out);
  r = run("verify --inject-fault");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("# counterexample"), std::string::npos);
}
