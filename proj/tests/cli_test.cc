#include "agler/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "agler/json_io.h"

namespace agler {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  Json doc() const { return Json::parse(out); }
  Json error() const { return Json::parse(err); }
};

Outcome RunCli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::Run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("agler_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kOnePoly = R"({"nvars":2,"degrees":[0,0],"coeffs":[[1,0]]})";
const char* kQ3 = R"({"nvars":2,"degrees":[1,1],"coeffs":[[3,0],[-1,0],[-1,0],[-1,0]]})";
const char* kP4Phi =
    R"({"m":{"nvars":2,"degrees":[0,0],"coeffs":[[1,0]]},)"
    R"("p":{"nvars":2,"degrees":[1,1],"coeffs":[[4,0],[-1,0],[-1,0],[0,0]]},"profile":[1,1]})";

std::string Slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST_F(CliTest, SubcommandTable) {
  const std::vector<std::string> expect = {
      "reflect",       "eval",          "kernel-eval",  "agler-residual", "decompose",
      "extract-sos",   "unique-check",  "make-example", "support-check",  "check-stable",
      "pick-feasible", "pick-one-var",  "ando-check"};
  std::vector<std::string> got = cli::Subcommands();
  std::sort(got.begin(), got.end());
  std::vector<std::string> want = expect;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST_F(CliTest, ReflectExample) {
  const Outcome o = RunCli({"reflect", "--poly", Write("q3.json", kQ3), "--profile", "1,1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json d = o.doc();
  EXPECT_EQ(d["meta"]["command"], "reflect");
  const Poly got = io::PolyFromJson(d["result"]);
  const Poly want = Poly::FromTerms(
      2, {{{1, 1}, 3.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}, {{0, 0}, -1.0}});
  EXPECT_EQ(got, want);
  EXPECT_EQ(o.out.find("-0.0"), std::string::npos);
}

TEST_F(CliTest, DecomposeConstantGivesZeroPair) {
  const std::string phi =
      Write("one.json", std::string(R"({"m":)") + kOnePoly + R"(,"p":)" + kOnePoly + "}");
  const Outcome o = RunCli({"decompose", "--phi", phi});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json r = o.doc()["result"];
  EXPECT_EQ(r["status"], "feasible");
  EXPECT_TRUE(r["K1"]["basis"].empty());
  EXPECT_TRUE(r["K2"]["basis"].empty());
  EXPECT_EQ(r["certificate"]["residual_max"].get<double>(), 0.0);
}

TEST_F(CliTest, PickDuplicateNodesIsASuccessfulAnswer) {
  const std::string data =
      Write("dup.json", R"({"nodes":[[[0,0],[0,0]],[[0,0],[0,0]]],"targets":[[0,0],[0.5,0]]})");
  const Outcome o = RunCli({"pick-feasible", "--data", data});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.doc()["result"]["status"], "infeasible_evidence");
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
  const std::string bad_m = Write(
      "bad.json", std::string(R"({"m":{"nvars":2,"degrees":[1,0],"coeffs":[[1,0],[1,0]]},"p":)") +
                      kOnePoly + "}");
  const Outcome o = RunCli({"decompose", "--phi", bad_m});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(o.error()["error"]["kind"], "validation");
  EXPECT_TRUE(o.out.empty());

  EXPECT_EQ(RunCli({"reflect", "--poly", Write("q3.json", kQ3), "--bogus-flag"}).code, 2);
  EXPECT_EQ(RunCli({"reflect"}).code, 2);
  EXPECT_EQ(RunCli({"reflect", "--poly", Path("missing.json")}).code, 2);
  EXPECT_EQ(RunCli({"make-example", "--k1", "0", "--k2", "1"}).code, 2);
}

TEST_F(CliTest, SolverUnknownExitsThreeWithOutput) {
  const Outcome ex = RunCli({"make-example", "--k1", "2", "--k2", "2"});
  ASSERT_EQ(ex.code, 0);
  const std::string phi = Write("ex22.json", ex.out);
  const Outcome o = RunCli({"decompose", "--phi", phi, "--eps-affine", "1e-300"});
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(o.doc()["result"]["status"], "unknown");
  EXPECT_EQ(o.error()["error"]["kind"], "solver_unknown");
}

TEST_F(CliTest, UnknownSubcommandExits64) {
  EXPECT_EQ(RunCli({"frobnicate"}).code, 64);
  EXPECT_EQ(RunCli({}).code, 64);
}

TEST_F(CliTest, MalformedJsonExits65) {
  const Outcome o = RunCli({"reflect", "--poly", Write("bad.json", "{\"nvars\": 2,"), "--profile", "1,1"});
  EXPECT_EQ(o.code, 65);
  EXPECT_EQ(o.error()["error"]["kind"], "malformed_json");
}

TEST_F(CliTest, EnvelopeInputsAreUnwrapped) {
  const std::string phi = Write("ex11.json", RunCli({"make-example", "--k1", "1", "--k2", "1"}).out);
  const Outcome u = RunCli({"unique-check", "--phi", phi});
  ASSERT_EQ(u.code, 0) << u.err;
  EXPECT_EQ(u.doc()["result"]["verdict"], "UNIQUE");
  const Outcome s = RunCli({"check-stable", "--poly", Write("q3.json", kQ3)});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_FALSE(s.doc()["result"]["stable"].get<bool>());
}

TEST_F(CliTest, EvalAndKernelEval) {
  const std::string phi = Write("p4.json", kP4Phi);
  const Outcome e = RunCli({"eval", "--poly", Write("q3.json", kQ3), "--z", "[[0.5,0],[0.5,0]]"});
  ASSERT_EQ(e.code, 0) << e.err;
  const Complex v = io::ComplexFromJson(e.doc()["result"]["value"]);
  EXPECT_NEAR(std::abs(v - (3.0 - 0.5 - 0.5 - 0.25)), 0.0, 1e-15);
  const Outcome k = RunCli({"kernel-eval", "--phi", phi, "--z", "[0,0]", "--w", "[0,0]"});
  ASSERT_EQ(k.code, 0) << k.err;
  // phi(0) = p~(0) / p(0) = 0.
  EXPECT_NEAR(std::abs(io::ComplexFromJson(k.doc()["result"]["value"]) - 1.0), 0.0, 1e-15);
}

TEST_F(CliTest, OutFlagMatchesStdout) {
  const std::string phi = Write("p4.json", kP4Phi);
  const Outcome a = RunCli({"decompose", "--phi", phi});
  const Outcome b = RunCli({"decompose", "--phi", phi, "--out", Path("pair.json")});
  ASSERT_EQ(b.code, 0);
  EXPECT_TRUE(b.out.empty());
  // Only the recorded flags differ.
  Json da = a.doc();
  Json db = Json::parse(Slurp(Path("pair.json")));
  EXPECT_EQ(da["result"], db["result"]);
}

TEST_F(CliTest, DeterministicOutput) {
  const std::string phi = Write("p4.json", kP4Phi);
  const std::vector<std::vector<std::string>> runs = {
      {"decompose", "--phi", phi},
      {"agler-residual", "--phi", phi, "--pair", Write("pair.json", RunCli({"decompose", "--phi", phi}).out), "--n-points", "30"},
      {"check-stable", "--poly", Write("q3.json", kQ3)},
      {"ando-check", "--poly", Write("one.json", kOnePoly), "--pairs", "5", "--seed", "7"},
      {"unique-check", "--phi", phi},
  };
  for (const auto& args : runs) {
    const Outcome a = RunCli(args);
    const Outcome b = RunCli(args);
    ASSERT_EQ(a.code, 0) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST_F(CliTest, BinaryIsByteIdenticalAcrossProcesses) {
  const std::string phi = Write("p4.json", kP4Phi);
  for (const char* out : {"a.json", "b.json"}) {
    const std::string cmd = std::string("\"") + AGLER_CLI_PATH + "\" decompose --phi \"" + phi +
                            "\" --seed 0x1234 --out \"" + Path(out) + "\"";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
  }
  const std::string a = Slurp(Path("a.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(Path("b.json")));
}

TEST_F(CliTest, OutputsRoundTrip) {
  const std::string phi = Write("p4.json", kP4Phi);
  const std::vector<std::vector<std::string>> runs = {
      {"reflect", "--poly", Write("q3.json", kQ3), "--profile", "1,1"},
      {"make-example", "--k1", "2", "--k2", "3"},
      {"decompose", "--phi", phi},
      {"support-check", "--phi", phi, "--n1", "8", "--n2", "8"},
      {"pick-feasible", "--data",
       Write("pk.json", R"({"nodes":[[[0,0],[0,0]],[[0.5,0],[0,0]]],"targets":[[0,0],[0.5,0]]})")},
  };
  for (const auto& args : runs) {
    const Outcome o = RunCli(args);
    ASSERT_EQ(o.code, 0) << args[0] << ": " << o.err;
    const Json d = o.doc();
    EXPECT_EQ(d.dump(2) + "\n", o.out) << args[0];
  }
  // Typed round trips.
  const Json poly = RunCli(runs[0]).doc()["result"];
  EXPECT_EQ(io::ToJson(io::PolyFromJson(poly)), poly);
  const Json ex = RunCli(runs[1]).doc()["result"];
  EXPECT_EQ(io::ToJson(io::PhiFromJson(ex)), ex);
  Json pair = RunCli(runs[2]).doc()["result"];
  pair.erase("status");
  EXPECT_EQ(io::ToJson(io::PairFromJson(pair)), pair);
}

}  // namespace
}  // namespace agler
