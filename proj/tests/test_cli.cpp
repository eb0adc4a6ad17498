// SPDX-License-Identifier: Apache-2.0
// Runs the redsimp binary (path in REDSIMP_BIN) as a subprocess.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "redsimp/dsl.hpp"
#include "schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;  // stdout and stderr
};

std::string bin() {
  const char* b = std::getenv("REDSIMP_BIN");
  return b ? b : "redsimp";
}

Outcome run(const std::string& args) {
  Outcome r;
  FILE* p = popen((bin() + " " + args + " 2>&1").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path temp_dir() {
  fs::path d = fs::temp_directory_path() / ("redsimp_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path p = temp_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json schema() { return json::parse(slurp(fs::path(REDSIMP_DATA_DIR) / "schema/report.schema.json")); }

const char* const kCorpus[] = {"prefix_sum", "prefix_max", "sliding_max",
                               "parallelogram", "tetra", "four_d"};

}  // namespace

TEST(Cli, SimplifyPrintsPlanAndDegrees) {
  Outcome r = run("simplify prefix_max --verify");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("Scan(rho=(1,0))"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("degree: 2 -> 1"), std::string::npos);
  EXPECT_NE(r.out.find("all matches: true"), std::string::npos);
}

TEST(Cli, ReadsFilesFromDisk) {
  const auto& e = redsimp::bundled_corpus().front();
  fs::path p = write_temp("mine.red", e.text);
  Outcome r = run("simplify " + p.string());
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, ParseErrorIsExitOne) {
  fs::path p = write_temp("bad.red",
                          "reduction bad {\n  param N >= 1;\n  domain [i,j] : 0 <= j <= i <= N;\n"
                          "  write [i,j] -> [i]\n  read [i,j] -> [j];\n  op max;\n}\n");
  Outcome r = run("simplify " + p.string());
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find(p.string() + ":5:"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("error:"), std::string::npos);
  EXPECT_EQ(run("simplify /nonexistent/file.red").code, 1);
  EXPECT_EQ(run("simplify").code, 1);
  EXPECT_EQ(run("frobnicate prefix_max").code, 1);
  EXPECT_EQ(run("simplify prefix_max --verify --ns 3,x").code, 1);
}

TEST(Cli, UnsupportedInputIsExitTwo) {
  EXPECT_EQ(run("simplify prefix_max --verify --ns 0").code, 2);
  EXPECT_EQ(run("verify prefix_max --fit-ns 4,8").code, 2);
  EXPECT_EQ(run("simplify prefix_max --fractal-threshold 0").code, 2);
  fs::path p = write_temp("unbounded.red",
                          "reduction u {\n  param N >= 1;\n  domain [i,j] : 0 <= j <= i;\n"
                          "  write [i,j] -> [i];\n  read [i,j] -> [j];\n  op max;\n}\n");
  Outcome r = run("simplify " + p.string() + " --verify");
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("unbounded"), std::string::npos);
}

TEST(Cli, MismatchIsExitThree) {
  Outcome r = run("simplify prefix_sum --verify --skew-inputs 1");
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("match=false"), std::string::npos);
}

TEST(Cli, InvariantViolationIsExitFour) {
  Outcome r = run("simplify tetra --max-depth 0");
  EXPECT_EQ(r.code, 4) << r.out;
  EXPECT_NE(r.out.find("invariant"), std::string::npos);
}

TEST(Cli, LatticeTextAndDot) {
  Outcome t = run("lattice tetra");
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("dim 2: 4 faces"), std::string::npos) << t.out;
  EXPECT_NE(t.out.find("dim 1: 6 faces"), std::string::npos);
  EXPECT_NE(t.out.find("dim 0: 4 faces"), std::string::npos);
  Outcome d = run("lattice prefix_sum --dot");
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out.rfind("digraph", 0), 0u) << d.out;
  for (const char* l : {"{1}", "{2}", "{3}", "{1,2}", "{2,3}"})
    EXPECT_NE(d.out.find(l), std::string::npos) << l;
}

TEST(Cli, Labelings) {
  Outcome r = run("labelings tetra");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("labelings: 12"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("rho = [1,0,0] admissible"), std::string::npos);
}

TEST(Cli, ReportsValidateAgainstTheSchema) {
  const json s = schema();
  for (const char* name : kCorpus) {
    fs::path rep = temp_dir() / (std::string(name) + ".json");
    fs::path csv = temp_dir() / (std::string(name) + ".csv");
    const std::string fit = std::string(name) == "four_d" ? "16,24,32" : "32,64,128";
    Outcome r = run(std::string("verify ") + name + " --ns 4,7 --fit-ns " + fit + " --report " +
                rep.string() + " --csv " + csv.string());
    ASSERT_EQ(r.code, 0) << r.out;
    json j = json::parse(slurp(rep));
    std::string err;
    EXPECT_TRUE(schema_check::validate(s, j, err)) << name << ": " << err;
    EXPECT_EQ(j["degrees"]["after"], j["degrees"]["target"]) << name;
    EXPECT_TRUE(j["verification"]["all_match"].get<bool>());
    EXPECT_EQ(slurp(csv).rfind("n,ops_raw,ops_simplified\n", 0), 0u);
  }
  // A report without verification also validates.
  fs::path rep = temp_dir() / "plain.json";
  ASSERT_EQ(run("simplify prefix_max --report " + rep.string()).code, 0);
  json j = json::parse(slurp(rep));
  std::string err;
  EXPECT_TRUE(schema_check::validate(s, j, err)) << err;
  EXPECT_EQ(j["degrees"]["before"], 2);
  EXPECT_EQ(j["degrees"]["after"], 1);
  EXPECT_FALSE(j.contains("verification"));
  // And a mangled one does not.
  j["degrees"]["after"] = "one";
  EXPECT_FALSE(schema_check::validate(s, j, err));
}

TEST(Cli, EmitToFile) {
  fs::path out = temp_dir() / "sliding.c";
  Outcome r = run("emit-c sliding_max -o " + out.string());
  EXPECT_EQ(r.code, 0) << r.out;
  std::string c = slurp(out);
  EXPECT_NE(c.find("void sliding_max(long N)"), std::string::npos);
  EXPECT_NE(c.find("/* recursion */"), std::string::npos);
  Outcome s = run("simplify prefix_max --emit-c " + (temp_dir() / "pm.c").string());
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(slurp(temp_dir() / "pm.c").find("/* forward scan */"), std::string::npos);
}

TEST(Cli, CorpusFilesMatchTheBundledTexts) {
  fs::path dir = temp_dir() / "corpus";
  ASSERT_EQ(run("corpus --write " + dir.string()).code, 0);
  for (const auto& e : redsimp::bundled_corpus()) {
    EXPECT_EQ(slurp(dir / e.file), e.text) << e.file;
    EXPECT_EQ(slurp(fs::path(REDSIMP_DATA_DIR) / "corpus" / e.file), e.text) << e.file;
  }
  Outcome l = run("corpus");
  EXPECT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("four_d.red"), std::string::npos);
  Outcome v = run("corpus --verify --ns 3,5");
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("tetra.red: degree 3 -> 1, all matches true"), std::string::npos) << v.out;
}
