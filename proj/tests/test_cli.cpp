#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using namespace spikeflow;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spikeflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("spikeflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

const char* kToyNetlist =
    "MODE overflow\n"
    "N 0 1 0 1 0 input\n"
    "N 1 1 0 1 0 accept\n"
    "N 2 1 0 1 0 reject\n"
    "S 0 1 0 1\n";

}  // namespace

TEST_F(Cli, GenerateIsDeterministic) {
  const auto a = cli({"generate", "-n", "5", "-m", "7", "--seed", "1"});
  const auto b = cli({"--seed", "1", "generate", "-n", "5", "-m", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, cli({"generate", "-n", "5", "-m", "7", "--seed", "2"}).out);
  EXPECT_NE(a.out.find("p max 5 7"), std::string::npos);
  const auto sparse = cli({"generate", "-n", "10", "--suite", "sparse"});
  EXPECT_NE(sparse.out.find("p max 10 14"), std::string::npos);
}

TEST_F(Cli, SolveChain) {
  const auto in = file("chain.max", "p max 4 3\nn 1 s\nn 4 t\na 1 2 3\na 2 3 5\na 3 4 4\n");
  const auto r = cli({"solve", in});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], 3);
  const auto csv = cli({"solve", in, "--mode", "residual", "--format", "csv"});
  EXPECT_EQ(csv.out, "edge,u,v,cap,flow\n0,1,2,3,3\n1,2,3,5,3\n2,3,4,4,3\n");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"solve"}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"solve", path("missing.max")}).code, 2);
  const auto bad = cli({"solve", file("bad.max", "p max 2 1\nn 1 s\nn 2 t\na 1 9 1\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 4"), std::string::npos) << bad.err;
  const auto wide = file("wide.max", "p max 3 2\nn 1 s\nn 3 t\na 1 2 100\na 2 3 100\n");
  EXPECT_EQ(cli({"decide-naive", wide, "-d", "1"}).code, 3);
  const auto net = file("toy.net", kToyNetlist);
  EXPECT_EQ(cli({"verify-reduction", net, "-t", "2", "-e", "4", "--mutation", "drop-failure",
                 "--dump", path("dump.tnfr")})
                .code,
            4);
  EXPECT_NE(slurp(path("dump.tnfr")).find("p tnfr"), std::string::npos);
  EXPECT_EQ(cli({"reduce", net, "-t", "2", "-e", "99"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(Cli, DecideNaive) {
  const auto in = file("path.max", "p max 3 2\nn 1 s\nn 3 t\na 1 2 2\na 2 3 1\n");
  EXPECT_EQ(cli({"decide-naive", in, "-d", "0"}).out, "accept\n");
  EXPECT_EQ(cli({"decide-naive", in, "-d", "1"}).out, "reject\n");
  const auto j = nlohmann::json::parse(
      cli({"decide-naive", in, "-d", "0", "--format", "json", "--netlist", path("d.net")}).out);
  EXPECT_EQ(j["accept_time"], j["f_max"].get<int>() + 5);
  EXPECT_NE(slurp(path("d.net")).find("N 0 "), std::string::npos);
}

TEST_F(Cli, ReductionTools) {
  const auto net = file("toy.net", kToyNetlist);
  const auto tnfr = path("toy.tnfr");
  const auto r = cli({"reduce", net, "-t", "2", "-e", "4", "--out", tnfr, "--witness", path("w.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("w.csv")).rfind("arc,flow\n", 0), 0u);
  EXPECT_EQ(cli({"tnfr-check", tnfr}).out, "yes\n");
  EXPECT_EQ(cli({"verify-reduction", net, "-t", "2", "-e", "2"}).out.rfind("pass", 0), 0u);
  const auto rej = path("rej.tnfr");
  cli({"reduce", net, "-t", "2", "-e", "2", "--out", rej});
  EXPECT_EQ(cli({"tnfr-check", rej}).out, "no\n");

  const auto one = file("one.tnfr", "p tnfr 2 1 2\nn 1 s\nn 2 t\na 1 2 0 3\n");
  EXPECT_EQ(cli({"tnfr-check", one}).out, "yes\n");
  cli({"tnfr-check", one, "--witness", path("one.csv")});
  EXPECT_EQ(slurp(path("one.csv")), "arc,flow\n1,3\n");
  EXPECT_EQ(cli({"tnfr-check", one, "--max-arcs", "0"}).code, 3);
}

TEST_F(Cli, SimulateTrace) {
  const auto net = file("clock.net", "N 0 1 0 1 1 standard\nS 0 0 1 1\n");
  EXPECT_EQ(cli({"simulate", net, "--steps", "3"}).out, "time,neuron_id\n0,0\n1,0\n2,0\n");
  const auto j = nlohmann::json::parse(cli({"simulate", net, "--steps", "2", "--format", "json"}).out);
  EXPECT_EQ(j["energy"], 2);
}

TEST_F(Cli, BenchOutputs) {
  const auto r = cli({"bench", "--suite", "sparse", "--sizes", "5", "10", "20", "--samples", "2",
                      "--seed", "3", "--summary", path("s.json"), "--gnuplot", path("g.dat"),
                      "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 7);  // header + 3 sizes x 2 samples
  const auto summary = nlohmann::json::parse(slurp(path("s.json")));
  EXPECT_EQ(summary["instances"], 6);
  EXPECT_EQ(summary["spikes_vs_edges"]["points"], 3);
  EXPECT_NE(slurp(path("g.dat")).find("# n_nodes"), std::string::npos);
  // same seed, one thread: identical rows
  const auto again =
      cli({"bench", "--suite", "sparse", "--sizes", "5", "10", "20", "--samples", "2", "--seed", "3"});
  EXPECT_EQ(again.out, r.out);
}
