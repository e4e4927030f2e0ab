#include "cli.hpp"

#include "nonlocal/inequalities.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using nonlocal::cli::run;
using json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json results(const std::vector<std::string>& args) {
  const Outcome o = invoke(args);
  EXPECT_EQ(o.code, 0) << o.err;
  return json::parse(o.out);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nonlocal_cli_test_" + name);
}

}  // namespace

TEST(Cli, DocumentShape) {
  const json d = results({"hardy"});
  EXPECT_EQ(d["command"], "hardy");
  for (const char* key : {"inputs", "results", "tolerances"}) EXPECT_TRUE(d.contains(key));
}

TEST(Cli, HardyDefaultViolates) {
  const json r = results({"hardy"})["results"];
  EXPECT_NEAR(r["p_pp_yy"].get<double>(), 0.0901699437494742, 1e-13);
  EXPECT_TRUE(r["violated"].get<bool>());
}

TEST(Cli, HardyAboveLossThreshold) {
  EXPECT_FALSE(results({"hardy", "--loss", "0.2"})["results"]["violated"].get<bool>());
}

TEST(Cli, HardyOverrideRecomputesTable) {
  const json r = results({"hardy", "--loss", "0", "--override", "theta2=+0.5"})["results"];
  const auto offsets = [] {
    nonlocal::AngleOffsets o{};
    o[static_cast<int>(nonlocal::Angle::Theta2)] = 0.5;
    return o;
  }();
  const double ch = nonlocal::ch_value(nonlocal::joint_table(nonlocal::TestKind::Hardy, offsets)).value;
  EXPECT_NEAR(r["ch"]["value"].get<double>(), ch, 1e-13);
  EXPECT_GT(std::abs(r["p_pp_yy"].get<double>() - 0.0901699437494742), 1e-3);
}

TEST(Cli, ChshValues) {
  const json r = results({"chsh"})["results"];
  EXPECT_NEAR(r["ch"]["value"].get<double>(), (std::sqrt(2.0) - 1.0) / 2.0, 1e-13);
  EXPECT_NEAR(r["chsh_expectation"]["value"].get<double>(), 2.0 * std::sqrt(2.0), 1e-13);
  char rate[32];
  std::snprintf(rate, sizeof rate, "%.17g", 3.0 - 2.0 * std::sqrt(2.0));
  const json l = results({"chsh", "--loss", rate})["results"];
  EXPECT_NEAR(l["ch"]["value"].get<double>(), 0.0, 1e-8);
}

TEST(Cli, I2233ReportsIdentityResiduals) {
  const json r = results({"i2233", "--loss", "0.1"})["results"];
  EXPECT_TRUE(r.contains("identity_residual"));
  EXPECT_LT(r["identity_residual_minus_y"].get<double>(), 1e-12);
  EXPECT_TRUE(r["ch_dominates"].get<bool>());
  EXPECT_NEAR(r["i2233"]["value"].get<double>(), r["i2233_observed"]["value"].get<double>(),
              1e-12);
}

TEST(Cli, PolytopeVertices) {
  const json r = results({"polytope", "vertices"})["results"];
  EXPECT_EQ(r["causal"]["count"], 24);
  EXPECT_EQ(r["local"]["count"], 16);
  EXPECT_EQ(r["hardy"]["count"], 5);
}

TEST(Cli, PolytopeMembership) {
  const json r = results({"polytope", "membership", "1,0,0,0"})["results"];
  EXPECT_TRUE(r["inside"].get<bool>());
  EXPECT_TRUE(r["facet_saturating"].get<bool>());
  EXPECT_TRUE(r["lhv"]["feasible"].get<bool>());
  const json out = results({"polytope", "membership", "0.5", "0.5", "0", "0"})["results"];
  EXPECT_FALSE(out["inside"].get<bool>());
  EXPECT_FALSE(out["violations"].empty());
}

TEST(Cli, PolytopeCrossSection) {
  const json r = results({"polytope", "cross-section", "0.25"})["results"];
  ASSERT_EQ(r["slices"].size(), 5u);
  for (const json& sl : r["slices"]) {
    ASSERT_EQ(sl["vertices"].size(), 3u);
    const double x0 = sl["vertices"][0][0], y0 = sl["vertices"][0][1];
    const double y1 = sl["vertices"][1][1], x2 = sl["vertices"][2][0];
    EXPECT_NEAR(y1 - y0, 0.25, 1e-14);
    EXPECT_NEAR(x0 - x2, 0.25, 1e-14);
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"hardy", "--loss", "abc"}).code, 2);
  EXPECT_EQ(invoke({"hardy", "--loss", "1.5"}).code, 2);
  EXPECT_EQ(invoke({"hardy", "--override", "theta9=0.1"}).code, 2);
  EXPECT_EQ(invoke({"hardy", "--override", "theta1"}).code, 2);
  EXPECT_EQ(invoke({"polytope", "membership", "1,x,0,0"}).code, 2);
  EXPECT_EQ(invoke({"polytope", "membership", "1,0,0"}).code, 2);
  EXPECT_EQ(invoke({"polytope", "spin"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--axes", "theta1,phi2", "--grid", "3"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--format", "csv", "--grid", "3"}).code, 2);
  EXPECT_EQ(invoke({"chsh", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, UnwritableOutputIsIoError) {
  EXPECT_EQ(invoke({"chsh", "--out", "/nonexistent-dir/x.json"}).code, 3);
}

TEST(Cli, SweepCsv) {
  const Outcome o = invoke({"sweep", "--test", "chsh", "--grid", "3", "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "axis1,axis2,axis3_boundary,averaged_ch_at_boundary");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0,0,0.171572875,", 0), 0u) << line;
  int rows = 1;
  while (std::getline(in, line)) {
    ++rows;
    if (rows == 9) EXPECT_EQ(line.substr(line.size() - 8), ",nan,nan");
  }
  EXPECT_EQ(rows, 9);
}

TEST(Cli, SweepJsonHasBothSurfacesAndIsDeterministic) {
  const std::vector<std::string> args = {"sweep", "--axes", "phi1,phi2", "--third", "phi",
                                         "--grid", "3", "--delta-max", "0.5"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json d = json::parse(a.out);
  ASSERT_EQ(d["results"]["surfaces"].size(), 2u);
  EXPECT_EQ(d["results"]["surfaces"][0]["test"], "hardy");
  EXPECT_EQ(d["results"]["surfaces"][1]["samples"].size(), 9u);
}

TEST(Cli, QuadOrderChangesSweepBelowTolerance) {
  const json a = results({"sweep", "--test", "hardy", "--axes", "theta1p,theta2p", "--grid", "3",
                          "--delta-max", "0.4"});
  const json b = results({"sweep", "--test", "hardy", "--axes", "theta1p,theta2p", "--grid", "3",
                          "--delta-max", "0.4", "--quad-order", "64"});
  const json& sa = a["results"]["surfaces"][0]["samples"];
  const json& sb = b["results"]["surfaces"][0]["samples"];
  for (std::size_t i = 0; i < sa.size(); ++i) {
    ASSERT_EQ(sa[i]["status"], sb[i]["status"]);
    if (sa[i]["boundary"].is_null()) continue;
    EXPECT_LT(std::abs(sa[i]["boundary"].get<double>() - sb[i]["boundary"].get<double>()), 1e-8);
  }
}

TEST(Cli, JsonFileRoundTrip) {
  const auto path = temp_file("i2233.json");
  const Outcome o = invoke({"i2233", "--loss", "0.3", "--test", "hardy", "--out", path.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  const json d = json::parse(in);
  const auto ideal = nonlocal::joint_table(nonlocal::TestKind::Hardy);
  const nonlocal::LossModel loss(d["inputs"]["loss"].get<double>());
  const double value = nonlocal::i2233_loss_value(ideal, loss).value;
  const double stored = d["results"]["i2233"]["value"].get<double>();
  EXPECT_NEAR(stored, value, 1e-14 * std::max(1.0, std::abs(value)));
  EXPECT_EQ(d["results"]["violated"].get<bool>(), value > nonlocal::kViolationTol);
  std::filesystem::remove(path);
}

TEST(Cli, OptimizeSeedIsDeterministic) {
  const json a = results({"optimize", "--test", "chsh", "--seed", "3"});
  const json b = results({"optimize", "--test", "chsh", "--seed", "3"});
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a["results"]["value"].get<double>(), (std::sqrt(2.0) - 1.0) / 2.0, 1e-8);
}
