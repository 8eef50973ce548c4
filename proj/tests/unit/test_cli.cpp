#include <gtest/gtest.h>
#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("spaceform_float_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string spec(const std::string& name) { return std::string(SPACEFORM_FLOAT_SPECS) + "/" + name; }

Invocation cli(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = env + " \"" + std::string(SPACEFORM_FLOAT_CLI) + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Invocation r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

json parse(const Invocation& r) { return json::parse(r.out); }

}  // namespace

TEST(Cli, FloatbodyUnitDisk) {
  const Invocation r = cli("floatbody " + spec("unit_disk.json") + " --delta 1e-3 --directions 64");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = parse(r);
  EXPECT_EQ(j["schema"], "spaceform-float/v1");
  EXPECT_EQ(j["n"], 2);
  EXPECT_TRUE(j.contains("tolerances"));
  ASSERT_EQ(j["profile"].size(), 64u);
  ASSERT_EQ(j["support"].size(), 64u);
  const double d0 = j["profile"][0]["depth"];
  for (const auto& p : j["profile"]) {
    EXPECT_NEAR(p["depth"].get<double>(), d0, 1e-10);
    EXPECT_LE(p["residual"].get<double>(), 1e-10 * std::numbers::pi);
    EXPECT_EQ(p["direction"].size(), 2u);
  }
  EXPECT_GT(j["hausdorff_gap_estimate"].get<double>(), 0.0);
}

TEST(Cli, FloatbodyDeltaTooLarge) {
  const Invocation r = cli("floatbody " + spec("unit_disk.json") + " --delta 3");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("EmptyWulff"), std::string::npos);
  // Admissible δ whose Wulff shape is empty.
  const Invocation s = cli("floatbody " + spec("square.json") + " --delta 2.4 --directions 64");
  EXPECT_EQ(s.code, 2);
  EXPECT_NE(s.err.find("EmptyWulff"), std::string::npos);
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(cli("floatbody " + spec("malformed.json") + " --delta 1e-3").code, 64);
  EXPECT_EQ(cli("floatbody " + spec("does_not_exist.json") + " --delta 1e-3").code, 64);
  EXPECT_EQ(cli("floatbody " + spec("outside_model.json") + " --delta 1e-3").code, 64);
  EXPECT_EQ(cli("floatarea " + spec("unit_disk.json") + " --no-such-flag").code, 64);
  EXPECT_EQ(cli("floatarea").code, 64);
  EXPECT_EQ(cli("").code, 64);
  EXPECT_EQ(cli("converge " + spec("unit_disk.json") + " --delta-grid 1e-2:1e-4:3").code, 64);
  EXPECT_EQ(cli("floatbody " + spec("square.json") + " --delta 1e-3 --directions 2").code, 64);
}

TEST(Cli, Help) { EXPECT_EQ(cli("--help").code, 0); }

TEST(Cli, FloatareaSquareIsZero) {
  const Invocation r = cli("floatarea " + spec("square.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r)["value"].get<double>(), 0.0);
}

TEST(Cli, FloatareaDisks) {
  const Invocation r = cli("floatarea " + spec("unit_disk.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(parse(r)["value"].get<double>(), 2.0 * std::numbers::pi, 1e-10);
  const Invocation h = cli("floatarea " + spec("hyperbolic_disk.json"));
  EXPECT_NEAR(parse(h)["value"].get<double>(), 8.0856987729951781, 1e-9);
  EXPECT_EQ(parse(h)["lambda"], -1.0);
  const Invocation o = cli("floatarea " + spec("unit_disk.json") + " --lambda -0.5");
  EXPECT_EQ(parse(o)["lambda"], -0.5);
  const Invocation e = cli("floatarea " + spec("ellipsoid3d.json") + " --resolution 5000");
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(parse(e)["n"], 3);
}

TEST(Cli, ConvergeUnitDisk) {
  const Invocation r = cli("converge " + spec("unit_disk.json") + " --delta-grid 1e-4:1e-2:5");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = parse(r);
  EXPECT_LE(j["relative_error"].get<double>(), 1e-2);
  EXPECT_EQ(j["quotients"].size(), 5u);
}

TEST(Cli, CsvOutput) {
  const fs::path out = scratch() / "area.json";
  const Invocation r = cli("floatbody " + spec("smooth.json") + " --directions 64 --csv --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json j = json::parse(slurp(out));
  EXPECT_EQ(j["profile"].size(), 64u);
  const std::string csv = slurp(out.string() + ".csv");
  EXPECT_EQ(csv.rfind("vx,vy,support,depth,residual\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
  const Invocation s = cli("floatarea " + spec("unit_disk.json") + " --csv");
  EXPECT_EQ(s.out.rfind("value,quadrature_error,resolution\n", 0), 0u);
}

TEST(Cli, DeterministicModuloTimestamp) {
  const std::string args = "floatbody " + spec("clipped.json") + " --directions 64";
  json a = parse(cli(args));
  json b = parse(cli(args, "SPACEFORM_FLOAT_THREADS=1"));
  json c = parse(cli(args + " --threads 3"));
  a.erase("timestamp");
  b.erase("timestamp");
  c.erase("timestamp");
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.dump(), c.dump());
}

TEST(Cli, Experiments) {
  EXPECT_EQ(cli("sandwich --lambda -1 --directions 256").code, 0);
  EXPECT_EQ(cli("sandwich " + spec("smooth.json") + " --directions 256").code, 0);
  EXPECT_EQ(cli("valuation --lambda 1 --resolution 2048").code, 0);
  EXPECT_EQ(cli("valuation " + spec("smooth.json") + " --cut-a 0.2 --cut-b -0.1").code, 0);
  const Invocation skipped = cli("valuation --cut-a 0.2 --cut-b 0.2");
  EXPECT_EQ(skipped.code, 0);
  EXPECT_TRUE(parse(skipped)["reports"][0]["checks"][0]["skipped"].get<bool>());
  EXPECT_EQ(cli("invariance --lambda -1 --resolution 2048").code, 0);
  EXPECT_EQ(cli("semicontinuity").code, 0);
  const Invocation iso = cli("isoperimetric --lambda 1 --alpha 0.5 --resolution 2048");
  ASSERT_EQ(iso.code, 0) << iso.err;
  EXPECT_TRUE(parse(iso)["conjecture_consistent"].get<bool>());
  const Invocation flat = cli("isoperimetric " + spec("unit_disk.json") + " --resolution 2048");
  EXPECT_TRUE(parse(flat)["flat"].get<bool>());
}

TEST(Cli, ValidateDefaultSuite) {
  const Invocation r = cli("validate");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(parse(r)["passed"].get<bool>());
}
