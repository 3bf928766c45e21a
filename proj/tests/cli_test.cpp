#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support/mutations.hpp"

using namespace mucalc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(cli::RunConfig cfg) {
  std::ostringstream out, err;
  int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

Outcome run_args(std::vector<std::string> args) {
  std::vector<const char*> argv{"mucalc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig cmd(std::string command, std::string formula = "") {
  cli::RunConfig cfg;
  cfg.command = std::move(command);
  cfg.formula = std::move(formula);
  return cfg;
}

std::string sample(const std::string& name) { return std::string(MUCALC_SAMPLES_DIR) + "/" + name; }

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mucalc_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

const char* kNestedLoop = "nu Z. mu X. ([a]Z \\/ <a>X)";

}  // namespace

TEST(Cli, ProveValid) {
  Outcome r = run(cmd("prove", kNestedLoop));
  EXPECT_EQ(r.code, cli::kValid);
  EXPECT_EQ(r.out.rfind("valid\n", 0), 0u);
  EXPECT_NE(r.out.find("Reset_z1"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ProveInvalidPrintsModel) {
  Outcome r = run(cmd("prove", "mu X. ([a]X \\/ <a>X)"));
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_EQ(r.out, "invalid\nroot s0\ns0:\n  --a--> s0\n");
}

TEST(Cli, ProveIsDeterministic) {
  for (const char* f : {kNestedLoop, "P \\/ <a>~P", "(nu X. (<a>X /\\ mu Y. (<a>Y \\/ P))) \\/ (nu Z. ([a]Z \\/ mu W. ([a]W \\/ ~P)))"}) {
    auto cfg = cmd("prove", f);
    cfg.format = "json";
    EXPECT_EQ(run(cfg).out, run(cfg).out) << f;
  }
}

TEST(Cli, ProveAcceptsUnguardedInput) {
  EXPECT_EQ(run(cmd("prove", "nu X. (X \\/ [a]X)")).code, cli::kValid);
  auto strict = cmd("prove", "nu X. (X \\/ [a]X)");
  strict.no_guard_transform = true;
  Outcome r = run(strict);
  EXPECT_EQ(r.code, cli::kError);
  EXPECT_NE(r.err.find("not guarded"), std::string::npos);
}

TEST(Cli, ProveNegatedInput) {
  EXPECT_EQ(run(cmd("prove", "~(mu X. ([a]X \\/ <a>X))")).code, cli::kInvalid);
  EXPECT_EQ(run(cmd("prove", "~(P /\\ ~P)")).code, cli::kValid);
}

TEST(Cli, ProveDot) {
  auto cfg = cmd("prove", kNestedLoop);
  cfg.format = "dot";
  Outcome r = run(cfg);
  EXPECT_EQ(r.code, cli::kValid);
  EXPECT_EQ(r.out.rfind("digraph proof", 0), 0u);
  cfg.formula = "<a>tt";
  r = run(cfg);
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_NE(r.out.find("digraph"), std::string::npos);
}

TEST(Cli, ProveTraceGoesToStderr) {
  auto cfg = cmd("prove", kNestedLoop);
  cfg.trace = true;
  Outcome r = run(cfg);
  EXPECT_EQ(r.code, cli::kValid);
  EXPECT_NE(r.err.find("[NuUnfold"), std::string::npos);
}

TEST(Cli, NodeLimitIsAnError) {
  auto cfg = cmd("prove", kNestedLoop);
  cfg.max_nodes = 2;
  EXPECT_EQ(run(cfg).code, cli::kError);
}

TEST_F(TempDir, ProofJsonRoundTrip) {
  auto cfg = cmd("prove", kNestedLoop);
  cfg.format = "json";
  Outcome r = run(cfg);
  ASSERT_EQ(r.code, cli::kValid);
  std::string proof = write("proof.json", r.out);

  auto check = cmd("check-proof");
  check.proof_file = proof;
  Outcome c = run(check);
  EXPECT_EQ(c.code, cli::kValid);
  EXPECT_EQ(c.out.rfind("accepted", 0), 0u);

  check.formula = kNestedLoop;
  EXPECT_EQ(run(check).code, cli::kValid);
  check.formula = "nu Z. [a]Z";
  EXPECT_EQ(run(check).code, cli::kInvalid);

  // Removing the Reset step breaks the repeat.
  auto proved = prove(prepare(parse(kNestedLoop)));
  auto doc = proof_to_json(*proved.system, mucalc::testing::splice_out(proved.proof(), 6));
  check.formula.clear();
  check.proof_file = write("broken.json", doc.dump());
  Outcome b = run(check);
  EXPECT_EQ(b.code, cli::kInvalid);
  EXPECT_EQ(b.out.rfind("rejected", 0), 0u);

  check.proof_file = write("garbage.json", "{");
  EXPECT_EQ(run(check).code, cli::kError);
}

TEST_F(TempDir, CountermodelChecksOut) {
  const char* f = "nu X. (P /\\ [a]X)";
  auto cfg = cmd("prove", f);
  cfg.format = "json";
  Outcome r = run(cfg);
  ASSERT_EQ(r.code, cli::kInvalid);
  auto check = cmd("check-model", f);
  check.lts_file = write("model.json", r.out);
  Outcome c = run(check);
  EXPECT_EQ(c.code, cli::kValid) << c.out << c.err;

  check.formula = "tt";
  EXPECT_EQ(run(check).code, cli::kInvalid);
}

TEST(Cli, CheckModelRoot) {
  auto check = cmd("check-model", "P");
  check.lts_file = sample("two_states.json");
  EXPECT_EQ(run(check).code, cli::kValid);
  check.root = "t";
  EXPECT_EQ(run(check).code, cli::kInvalid);
  check.root = "u";
  EXPECT_EQ(run(check).code, cli::kError);
}

TEST(Cli, Eval) {
  auto cfg = cmd("eval", "tt");
  cfg.lts_file = sample("two_states.json");
  EXPECT_EQ(run(cfg).out, "{s, t}\n");
  cfg.formula = "<a>P";
  EXPECT_EQ(run(cfg).out, "{s, t}\n");
  cfg.formula = "mu X. (P \\/ [a]X)";
  cfg.approximant = 2;
  EXPECT_EQ(run(cfg).out, "0: {}\n1: {t}\n2: {s, t}\n");
  cfg.approximant.reset();
  cfg.format = "json";
  cfg.formula = "P";
  EXPECT_EQ(nlohmann::json::parse(run(cfg).out)["states"], nlohmann::json::array({"t"}));
}

TEST(Cli, Normalize) {
  Outcome r = run(cmd("normalize", "~(nu Z. [a]Z)"));
  EXPECT_EQ(r.code, cli::kValid);
  EXPECT_EQ(r.out, "mu Z. <a>Z\n");
}

TEST(Cli, Refute) {
  Outcome r = run(cmd("refute", "[a]P \\/ [a]~P"));
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_NE(r.out.find("--a-->"), std::string::npos);
  Outcome none = run(cmd("refute", kNestedLoop));
  EXPECT_EQ(none.code, cli::kValid);
  EXPECT_EQ(none.out, "no countermodel with at most 3 states\n");
}

TEST(Cli, Errors) {
  Outcome r = run(cmd("prove", "P /\\"));
  EXPECT_EQ(r.code, cli::kError);
  EXPECT_EQ(r.err.rfind("error:", 0), 0u);
  EXPECT_EQ(run(cmd("prove", "nu Z. ~Z")).code, cli::kError);
  EXPECT_EQ(run(cmd("prove")).code, cli::kError);
  EXPECT_EQ(run(cmd("frobnicate", "tt")).code, cli::kError);
  auto missing = cmd("prove");
  missing.formula_file = "/nonexistent/formula";
  EXPECT_EQ(run(missing).code, cli::kError);
  auto no_lts = cmd("eval", "tt");
  no_lts.lts_file = "/nonexistent/lts.json";
  EXPECT_EQ(run(no_lts).code, cli::kError);
}

TEST(Cli, ArgvParsing) {
  EXPECT_EQ(run_args({"prove", kNestedLoop}).code, cli::kValid);
  EXPECT_EQ(run_args({"prove", "--file", sample("invalid.mu")}).code, cli::kInvalid);
  EXPECT_EQ(run_args({"prove", "-f", sample("two_loops.mu"), "--format", "json"}).code, cli::kValid);
  EXPECT_EQ(run_args({"eval", "P", "--lts", sample("two_states.json")}).out, "{t}\n");
  EXPECT_EQ(run_args({"check-model", "[a]P", "--model", sample("two_states.json"), "--root", "s"}).code, cli::kInvalid);
  EXPECT_EQ(run_args({"refute", "P", "--max-model-states", "1"}).code, cli::kInvalid);
  EXPECT_EQ(run_args({}).code, cli::kError);
  EXPECT_EQ(run_args({"prove", "tt", "--format", "xml"}).code, cli::kError);
  EXPECT_EQ(run_args({"--help"}).code, 0);
}
