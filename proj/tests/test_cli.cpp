/*
 * Copyright 2026 The Pixie Walk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "test_util.hpp"

using pixie::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI through the shell; stderr goes to `err_file` when given.
Run pixie_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + PIXIE_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(pixie_cli("synth --communities 4 --pins-per-community 50 --boards-per-community 8 "
                        "--edges-per-board 30 --edges-out " + q(dir_ / "e.tsv") +
                        " --topics-out " + q(dir_ / "t.tsv"))
                  .code,
              0);
    const auto c = pixie_cli("compile --edges " + q(dir_ / "e.tsv") + " --topics " + q(dir_ / "t.tsv") +
                             " --delta 0.9 --out " + q(dir_ / "g.pixg"));
    ASSERT_EQ(c.code, 0);
    compile_json_ = c.out;
  }

  TempDir dir_;
  std::string compile_json_;
};

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(pixie_cli("--help").code, 0);
  EXPECT_EQ(pixie_cli("compile --help").code, 0);
  EXPECT_EQ(pixie_cli("").code, 1);
  EXPECT_EQ(pixie_cli("frobnicate").code, 1);
  EXPECT_EQ(pixie_cli("compile --out x.pixg").code, 1);  // --edges missing
  EXPECT_EQ(pixie_cli("eval --experiment nonsense").code, 1);
}

TEST(Cli, RuntimeErrorsExitTwo) {
  TempDir dir;
  EXPECT_EQ(pixie_cli("compile --edges " + q(dir / "missing.tsv") + " --out " + q(dir / "g.pixg")).code, 2);
  EXPECT_EQ(pixie_cli("query --graph " + q(dir / "missing.pixg") + " --pin p1").code, 2);
}

TEST_F(CliPipeline, CompileReportsJson) {
  EXPECT_NE(compile_json_.find("\"edgesAfter\""), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "g.idmap"));
}

TEST_F(CliPipeline, NoOpPruningKeepsEveryEdge) {
  const auto r = pixie_cli("compile --edges " + q(dir_ / "e.tsv") + " --topics " + q(dir_ / "t.tsv") +
                           " --delta 1 --entropy-quantile 0 --out " + q(dir_ / "full.pixg"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["edgesAfter"], j["edgesBefore"]);
  EXPECT_EQ(j["boardsRemoved"], 0);
}

TEST_F(CliPipeline, QueryIsDeterministicTsv) {
  const std::string args = "query --graph " + q(dir_ / "g.pixg") + " --pin p3,p60 --weights 1,2 "
                           "--steps 5000 --top 10 --seed 9";
  const auto a = pixie_cli(args);
  const auto b = pixie_cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    EXPECT_EQ(line[0], 'p');
    EXPECT_GT(std::stod(line.substr(tab + 1)), 0.0);
  }
  EXPECT_EQ(n, 10);
}

TEST_F(CliPipeline, EnvironmentSuppliesDefaultsAndFlagsWin) {
  const std::string base = "query --graph " + q(dir_ / "g.pixg") + " --pin p60,p61,p62 --steps 5000 --seed 9";
  const auto env_top = pixie_cli(base, "PIXIE_TOP=3");
  ASSERT_EQ(env_top.code, 0);
  EXPECT_EQ(std::count(env_top.out.begin(), env_top.out.end(), '\n'), 3);
  const auto flag_top = pixie_cli(base + " --top 5", "PIXIE_TOP=3");
  EXPECT_EQ(std::count(flag_top.out.begin(), flag_top.out.end(), '\n'), 5);
}

TEST_F(CliPipeline, QueryErrors) {
  const std::string g = "query --graph " + q(dir_ / "g.pixg");
  EXPECT_EQ(pixie_cli(g + " --pin nothere").code, 2);             // empty query
  EXPECT_EQ(pixie_cli(g + " --pin p1 --alpha 1.5").code, 1);      // bad value
  EXPECT_EQ(pixie_cli(g + " --pin p1,p2 --weights 1").code, 1);   // weight count
  EXPECT_EQ(pixie_cli(g + " --pin p1 --user-features en").code, 1);
  EXPECT_EQ(pixie_cli(g + " --pin p1,nothere --steps 100 --top 1").code, 0);
}

TEST(Cli, EvalWritesCsvAndJson) {
  TempDir dir;
  const auto r = pixie_cli("eval --experiment bias --queries 4 --out " + q(dir / "bias.csv") +
                           " --json " + q(dir / "bias.json"));
  ASSERT_EQ(r.code, 0);
  std::ifstream csv(dir / "bias.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "beta,mean_fraction");
  EXPECT_TRUE(std::filesystem::exists(dir / "bias.json"));
}
