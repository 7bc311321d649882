#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "netpool");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = netpool::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value) {
      setenv(name, value, 1);
    } else {
      unsetenv(name);
    }
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      unsetenv(name_.c_str());
    } else {
      setenv(name_.c_str(), old_.c_str(), 1);
    }
  }

 private:
  std::string name_;
  std::string old_;
};

TEST(CliTest, PoolPathThree) {
  const Outcome o = run_cli({"pool", "--topology", "line", "--n", "3", "--x", "1,5,3", "--rules", "S|SSS", "--theta", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("combined            3 3 4"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("pooled_combined     3.33333"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("network_bias        0.333333"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("attention_bias      0.333333"), std::string::npos) << o.out;
}

TEST(CliTest, PoolJsonAndFile) {
  const auto xf = temp_file("netpool_cli_x.txt");
  {
    std::ofstream f(xf);
    f << "1\n\n3\n5\n";
  }
  const Outcome o = run_cli({"pool", "--topology", "line", "--n", "3", "--x-file", xf.string(), "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("\"network_bias\": 0.0"), std::string::npos) << o.out;
  std::filesystem::remove(xf);
}

TEST(CliTest, AnalyticStarVariance) {
  const Outcome o = run_cli({"analytic", "star-var", "--n", "10", "--sigma2", "1", "--rho", "0.3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "0.1008\n");
  const Outcome csv = run_cli({"analytic", "line-var", "--n", "10", "--format", "csv"});
  EXPECT_EQ(csv.out, "quantity,value\nline-var,0.0011111111111111111\n");
  EXPECT_EQ(run_cli({"analytic", "ei", "--x", "1"}).out, "1.89512\n");
}

TEST(CliTest, AnalyticDomainErrorIsUsage) {
  const Outcome o = run_cli({"analytic", "star-var", "--n", "2"});
  EXPECT_EQ(o.code, 2);
  EXPECT_FALSE(o.err.empty());
}

TEST(CliTest, AlphaStar) {
  const Outcome o = run_cli({"alpha", "--topology", "star", "--n", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "  node  alpha\n     1  0.333333\n     2  -0.166667\n     3  -0.166667\n");
  const Outcome csv = run_cli({"alpha", "--topology", "ring", "--n", "4", "--format", "csv"});
  EXPECT_EQ(csv.out, "node,alpha\n1,0\n2,0\n3,0\n4,0\n");
}

TEST(CliTest, GraphRoundTripsThroughFile) {
  const auto gf = temp_file("netpool_cli_graph.txt");
  ASSERT_EQ(run_cli({"graph", "--topology", "line", "--n", "4", "--out", gf.string()}).code, 0);
  EXPECT_EQ(slurp(gf), "n=4\n1 2\n2 3\n3 4\n");
  const Outcome o = run_cli({"alpha", "--graph-file", gf.string(), "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, 11), "node,alpha\n");
  std::filesystem::remove(gf);
}

TEST(CliTest, HelpListsFlags) {
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> cases = {
      {{"graph", "--help"}, {"--topology", "--n", "--seed", "--out"}},
      {{"alpha", "--help"}, {"--topology", "--graph-file", "--format"}},
      {{"pool", "--help"}, {"--x", "--x-file", "--rules", "--theta", "--sigmas"}},
      {{"analytic", "star-var", "--help"}, {"--n", "--sigma2", "--rho"}},
      {{"simulate", "--help"}, {"--config", "--replicates", "--seed", "--threads"}},
      {{"sweep", "--help"}, {"--config", "--mean-degree", "--graph-replicates"}},
  };
  for (const auto& [args, flags] : cases) {
    const Outcome o = run_cli(args);
    EXPECT_EQ(o.code, 0) << args[0];
    for (const auto& flag : flags) EXPECT_NE(o.out.find(flag), std::string::npos) << args[0] << " " << flag;
  }
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({"pool", "--topology", "line", "--n", "3", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run_cli({"pool", "--topology", "line", "--n", "3", "--x", "1,2,3", "--x-file", "f"}).code, 2);
  EXPECT_EQ(run_cli({"pool", "--topology", "line", "--n", "3", "--x", "1,2"}).code, 2);
  EXPECT_EQ(run_cli({"pool", "--topology", "line", "--n", "3", "--x", "1,2,3", "--rho", "1.2"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"alpha", "--topology", "torus", "--n", "3"}).code, 2);

  const auto cfg = temp_file("netpool_cli_bad.json");
  {
    std::ofstream f(cfg);
    f << R"({"topology": {"kind": "star"}, "n_values": [5], "replicatez": 10})";
  }
  const Outcome bad = run_cli({"simulate", "--config", cfg.string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("replicatez"), std::string::npos) << bad.err;
  std::filesystem::remove(cfg);

  const Outcome missing = run_cli({"simulate", "--config", "/nonexistent/config.json"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_EQ(run_cli({"simulate", "--topology", "poisson", "--mean-degree", "2", "--n", "10"}).code, 2);
}

std::vector<std::string> small_sweep(std::vector<std::string> extra) {
  std::vector<std::string> args = {"sweep",        "--topology", "poisson", "--mean-degree", "3", "--n", "20,40",
                                   "--replicates", "20",         "--graph-replicates", "7", "--format", "csv"};
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

TEST(CliTest, SeedPrecedence) {
  const ScopedEnv clear("NETPOOL_SEED", nullptr);
  const std::string zero = run_cli(small_sweep({})).out;
  const std::string nine = run_cli(small_sweep({"--seed", "9"})).out;
  EXPECT_NE(zero, nine);
  {
    const ScopedEnv env("NETPOOL_SEED", "9");
    EXPECT_EQ(run_cli(small_sweep({})).out, nine);
    EXPECT_EQ(run_cli(small_sweep({"--seed", "0"})).out, zero);

    const auto cfg = temp_file("netpool_cli_seed.json");
    {
      std::ofstream f(cfg);
      f << R"({"master_seed": 0})";
    }
    EXPECT_EQ(run_cli(small_sweep({"--config", cfg.string()})).out, zero);
    std::filesystem::remove(cfg);
  }
  {
    const ScopedEnv env("NETPOOL_SEED", "nine");
    EXPECT_EQ(run_cli(small_sweep({})).code, 2);
  }
}

TEST(CliTest, RepeatedRunsAreByteIdentical) {
  const auto a = temp_file("netpool_cli_a.csv");
  const auto b = temp_file("netpool_cli_b.csv");
  ASSERT_EQ(run_cli(small_sweep({"--seed", "5", "--threads", "1", "--out", a.string()})).code, 0);
  ASSERT_EQ(run_cli(small_sweep({"--seed", "5", "--threads", "4", "--out", b.string()})).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("n,mean_bias,var_bias,se_mean,se_var,analytic_var,replicates_used,seed_base\n", 0), 0u);
  std::filesystem::remove(a);
  std::filesystem::remove(b);

  const std::vector<std::string> sim = {"simulate", "--topology", "star", "--n", "5,9", "--replicates", "300",
                                        "--rho", "0.2", "--seed", "3", "--format", "json"};
  EXPECT_EQ(run_cli(sim).out, run_cli(sim).out);
}

TEST(CliTest, BinaryRunsStandalone) {
  const std::string cmd = std::string(NETPOOL_BINARY) + " analytic dm-precision --n 2 --rho 0.5 > " +
                          temp_file("netpool_cli_bin.txt").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(temp_file("netpool_cli_bin.txt")), "1.33333\n");
  std::filesystem::remove(temp_file("netpool_cli_bin.txt"));
  const std::string bad = std::string(NETPOOL_BINARY) + " pool --nope 2>/dev/null";
  const int status = std::system(bad.c_str());
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

}  // namespace
