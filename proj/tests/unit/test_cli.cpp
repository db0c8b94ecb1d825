#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "etr/cli.hpp"
#include "test_support.hpp"

namespace etr {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "etr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const Outcome o = run({"synth", "--out", data(), "--etypes", "14", "--noise", "0.1",
                           "--seed", "3"});
    ASSERT_EQ(o.code, 0) << o.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string data() { return dir_->file("data"); }
  static std::string in(const std::string& f) { return (fs::path(data()) / f).string(); }
  static std::string scratch(const std::string& f) { return dir_->file(f); }

  static std::vector<std::string> recognize(const std::string& out) {
    return {"recognize", "--reference", in("reference.json"), "--candidate",
            in("candidate.json"), "--truth", in("truth_schema.tsv"), "--seed", "1",
            "--trees", "20", "--out", out};
  }

  static testing::TempDir* dir_;
};

testing::TempDir* Cli::dir_ = nullptr;

TEST_F(Cli, HelpExitsCleanly) {
  const Outcome o = run({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("recognize"), std::string::npos);
  EXPECT_EQ(run({"recognize", "--help"}).code, 0);
}

TEST_F(Cli, RecognizeWritesDeterministicArtifacts) {
  const Outcome a = run(recognize(scratch("run_a")));
  ASSERT_EQ(a.code, 0) << a.err;
  const Outcome b = run(recognize(scratch("run_b")));
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"features.tsv", "model.json", "report.json", "report.txt",
                        "similarities.tsv", "predictions.tsv"}) {
    const std::string x = slurp(fs::path(scratch("run_a")) / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(fs::path(scratch("run_b")) / f)) << f;
  }
  EXPECT_NE(a.out.find("Mi-F1"), std::string::npos);
}

TEST_F(Cli, EvalScoresSavedModel) {
  ASSERT_EQ(run(recognize(scratch("run_e"))).code, 0);
  const Outcome o = run({"eval", "--model", scratch("run_e") + "/model.json", "--corpus",
                         scratch("run_e") + "/features.tsv", "--out", scratch("eval")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(fs::path(scratch("eval")) / "report.json"));
}

TEST_F(Cli, InstanceLevelWithoutResources) {
  const Outcome o = run({"recognize", "--level", "instance", "--reference",
                         in("reference.json"), "--candidate", in("candidate.json"),
                         "--truth", in("truth_instance.tsv"), "--seed", "2", "--trees",
                         "10", "--out", scratch("inst")});
  EXPECT_EQ(o.code, 0) << o.err;
}

TEST_F(Cli, ConfigurationErrorsExitOne) {
  auto args = recognize(scratch("bad"));
  args[2] = scratch("does-not-exist.json");
  EXPECT_EQ(run(args).code, 1);
  EXPECT_EQ(run({"recognize", "--reference", in("reference.json"), "--candidate",
                 in("candidate.json"), "--truth", in("truth_schema.tsv")})
                .code,
            1);  // no --seed
  EXPECT_EQ(run({"recognize", "--bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  auto lam = recognize(scratch("bad"));
  lam.insert(lam.end(), {"--lambda", "2"});
  EXPECT_EQ(run(lam).code, 1);
}

TEST_F(Cli, DataErrorsExitTwo) {
  {
    std::ofstream f(scratch("broken.json"));
    f << "{\"format_version\": 1, \"etypes\": [";
  }
  auto args = recognize(scratch("bad"));
  args[2] = scratch("broken.json");
  const Outcome o = run(args);
  EXPECT_EQ(o.code, 2);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(Cli, ConfigFileSuppliesFlags) {
  {
    std::ofstream f(scratch("run.toml"));
    f << "format_version = 1\n\n[recognize]\nseed = 1\ntrees = 20\nreference = \""
      << in("reference.json") << "\"\ncandidate = \"" << in("candidate.json")
      << "\"\ntruth = \"" << in("truth_schema.tsv") << "\"\n";
  }
  const Outcome o = run({"--config", scratch("run.toml"), "recognize", "--out", scratch("cfg")});
  ASSERT_EQ(o.code, 0) << o.err;
  ASSERT_EQ(run(recognize(scratch("flags"))).code, 0);
  EXPECT_EQ(slurp(fs::path(scratch("cfg")) / "model.json"),
            slurp(fs::path(scratch("flags")) / "model.json"));

  {
    std::ofstream f(scratch("v2.toml"));
    f << "format_version = 2\n";
  }
  EXPECT_EQ(run({"--config", scratch("v2.toml"), "synth", "--out", scratch("s2")}).code, 1);
}

TEST_F(Cli, DumpContext) {
  const Outcome o = run({"dump-context", "--ontology", in("reference.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.rfind("# etr-context format_version=1 level=schema\n", 0), 0u);
}

TEST_F(Cli, AblateLambdaTable) {
  const Outcome o = run({"ablate", "--mode", "lambda", "--lambdas", "0.3,0.6", "--reference",
                         in("reference.json"), "--candidate", in("candidate.json"), "--truth",
                         in("truth_schema.tsv"), "--seed", "1", "--trees", "10", "--out",
                         scratch("abl")});
  ASSERT_EQ(o.code, 0) << o.err;
  bool found = false;
  for (const auto& e : fs::directory_iterator(scratch("abl"))) {
    found |= slurp(e.path()).find("Factor\tModel\t0.3\t0.6") != std::string::npos;
  }
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace etr

namespace etr {
namespace {

TEST(CliBinary, ExitCodesFromTheShell) {
  const std::string bin = ETR_CLI_PATH;
  EXPECT_EQ(std::system((bin + " --help > /dev/null").c_str()), 0);
  const int rc = std::system((bin + " recognize --reference /nonexistent.json"
                                    " --candidate /nonexistent.json --seed 1 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(rc));
  EXPECT_EQ(WEXITSTATUS(rc), 1);
}

}  // namespace
}  // namespace etr
