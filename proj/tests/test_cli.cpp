#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "xorq/io.hpp"

using namespace xorq;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  auto p = fs::temp_directory_path() / "xorq_test_cli";
  fs::create_directories(p);
  return p;
}

std::string path(const std::string &name) { return (work_dir() / name).string(); }

int run(const std::string &args) {
  const std::string cmd = std::string(XORQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, HelpExitsCleanly) { EXPECT_EQ(run("--help"), 0); }

TEST(Cli, BadArgumentsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("game --name nope"), 2);
  EXPECT_EQ(run("game --name tn"), 2);
  EXPECT_EQ(run("bias " + path("missing.json") + " --quantities omega"), 2);
  ASSERT_EQ(run("game --name chsh --out " + path("chsh.json")), 0);
  EXPECT_EQ(run("bias " + path("chsh.json") + " --quantities gamma"), 2);
  EXPECT_EQ(run("bias " + path("chsh.json") + " --quantities omega --format xml"), 2);
  EXPECT_EQ(run("bias " + path("chsh.json") + " --quantities omega --tol -1"), 2);
}

TEST(Cli, GameFilesMatchLibrary) {
  ASSERT_EQ(run("game --name tn --param 3 --out " + path("t3.json")), 0);
  EXPECT_EQ(read_file(path("t3.json")), game_to_json(t_game(3)));
  ASSERT_EQ(run("game --name chsh --out " + path("chsh.json")), 0);
  ASSERT_EQ(run("game --name tensor --input " + path("chsh.json") + " --input " + path("chsh.json") + " --out " +
                path("cc.json")),
            0);
  EXPECT_EQ(game_from_json(read_file(path("cc.json"))).n, 4);
  write_file_atomic(path("classical.json"), R"({"R": [[0.25, 0.25], [0.25, -0.25]]})");
  ASSERT_EQ(run("game --name classical-file --input " + path("classical.json") + " --out " + path("c.json")), 0);
  EXPECT_EQ(read_file(path("c.json")), read_file(path("chsh.json")));
}

TEST(Cli, BiasReportJson) {
  ASSERT_EQ(run("game --name chsh --out " + path("chsh.json")), 0);
  ASSERT_EQ(run("bias " + path("chsh.json") +
                " --quantities omega,omega-c,beta-sdp,beta-nc,chains --restarts 5 --format json --out " +
                path("chsh_report.json")),
            0);
  const auto j = nlohmann::json::parse(read_file(path("chsh_report.json")));
  EXPECT_NEAR(j.at("omega_lower").get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(j.at("omega_c_lower").get<double>(), std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(j.at("beta_sdp").get<double>(), std::sqrt(0.5), 1e-5);
  EXPECT_NEAR(j.at("beta_nc").get<double>(), std::sqrt(0.5), 1e-5);
}

TEST(Cli, OutputIsByteStable) {
  ASSERT_EQ(run("game --name hn --param 1 --out " + path("h1.json")), 0);
  for (const char *fmt : {"json", "csv", "text"}) {
    const std::string q = " --quantities omega,me:2,beta-nc --restarts 4 --seed 3 --format " + std::string(fmt);
    ASSERT_EQ(run("bias " + path("h1.json") + q + " --out " + path("a.out")), 0);
    ASSERT_EQ(run("bias " + path("h1.json") + q + " --out " + path("b.out")), 0);
    EXPECT_EQ(read_file(path("a.out")), read_file(path("b.out"))) << fmt;
  }
}

TEST(Cli, CompileThenSolve) {
  ASSERT_EQ(run("game --name hn --param 1 --out " + path("h1.json")), 0);
  ASSERT_EQ(run("sdp compile " + path("h1.json") + " --relaxation nc --out " + path("h1_nc.json")), 0);
  ASSERT_EQ(run("sdp solve " + path("h1_nc.json") + " --out " + path("h1_sol.json")), 0);
  const auto j = nlohmann::json::parse(read_file(path("h1_sol.json")));
  EXPECT_NEAR(j.at("primal_value").get<double>(), 0.6, 1e-5);
  EXPECT_TRUE(j.at("certify").at("ok").get<bool>());
  EXPECT_EQ(run("sdp compile " + path("h1.json") + " --relaxation sdp"), 2);
}

TEST(Cli, SolverFailureExitsFour) {
  write_file_atomic(path("infeasible.json"), R"({"format": "xorq-sdp-v1",
    "blocks": [{"label": "Z", "dim": 1}],
    "objective": [{"b": 0, "r": 0, "c": 0, "re": 1, "im": 0}],
    "constraints": [{"entries": [{"b": 0, "r": 0, "c": 0, "re": 1, "im": 0}], "rhs": -1}]})");
  EXPECT_EQ(run("sdp solve " + path("infeasible.json")), 4);
  write_file_atomic(path("garbage.json"), "{not json");
  EXPECT_EQ(run("sdp solve " + path("garbage.json")), 2);
}
