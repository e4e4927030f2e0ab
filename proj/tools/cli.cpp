#include "cli.hpp"

#include "nonlocal/circuit.hpp"
#include "nonlocal/inequalities.hpp"
#include "nonlocal/polytope.hpp"
#include "nonlocal/robustness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nonlocal::cli {

namespace {

using json = nlohmann::ordered_json;
using enum Setting;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<std::string> test;
  double loss = 0.0;
  std::vector<std::string> overrides;
  std::string axes = "theta1,theta2";
  std::string third = "loss";
  double delta_max = std::numbers::pi / 2.0;
  int grid = 81;
  int quad_order = 32;
  unsigned seed = 0;
  std::string format = "json";
  std::string out;
  std::string action;
  std::vector<std::string> action_args;
  int slices = 5;
};

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

std::string csv_num(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", *x);
  return buf;
}

json to_json(const TestReport& r) {
  return {{"value", num(r.value)},
          {"bound", num(r.bound)},
          {"violated", r.violated},
          {"margin", num(r.margin)}};
}

const char* setting_label(Setting a, Setting b) {
  static const char* labels[] = {"XX", "XY", "YX", "YY"};
  return labels[setting_index(a, b)];
}

json to_json(const CorrelationTable& t) {
  static const char outcome_chars[] = {'+', '-', '0'};
  json j = json::object();
  for (Setting a : kSettings) {
    for (Setting b : kSettings) {
      json blk = json::object();
      for (int m1 = 0; m1 < t.outcome_count(); ++m1) {
        for (int m2 = 0; m2 < t.outcome_count(); ++m2) {
          const std::string key{outcome_chars[m1], outcome_chars[m2]};
          blk[key] = num(t(a, b, static_cast<Outcome>(m1), static_cast<Outcome>(m2)));
        }
      }
      j[setting_label(a, b)] = blk;
    }
  }
  return j;
}

json to_json(const CircuitParams& p) {
  json j = json::object();
  for (Angle a : kAllAngles) j[std::string(angle_name(a))] = num(p[a]);
  return j;
}

template <typename Vec>
json vec_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(num(v(i)));
  return j;
}

TestKind test_or(const RunConfig& cfg, TestKind fallback) {
  if (!cfg.test) return fallback;
  const auto t = parse_test(*cfg.test);
  if (!t) throw UsageError("unknown test: " + *cfg.test);
  return *t;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("malformed " + what + ": '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(x)) {
    throw UsageError("malformed " + what + ": '" + s + "'");
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::optional<AngleOffsets> parse_overrides(const std::vector<std::string>& items) {
  if (items.empty()) return std::nullopt;
  AngleOffsets offsets{};
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("override must be NAME=DELTA: " + item);
    const auto angle = parse_angle(item.substr(0, eq));
    if (!angle) throw UsageError("unknown angle in override: " + item.substr(0, eq));
    offsets[static_cast<int>(*angle)] += parse_number(item.substr(eq + 1), "override");
  }
  return offsets;
}

json base_document(const RunConfig& cfg) {
  json inputs = json::object();
  if (!cfg.action.empty()) inputs["action"] = cfg.action;
  if (!cfg.action_args.empty()) inputs["args"] = cfg.action_args;
  if (cfg.test) inputs["test"] = *cfg.test;
  inputs["loss"] = num(cfg.loss);
  inputs["overrides"] = cfg.overrides;
  if (cfg.command == "sweep") {
    inputs["axes"] = cfg.axes;
    inputs["third"] = cfg.third;
    inputs["delta_max"] = num(cfg.delta_max);
    inputs["grid"] = cfg.grid;
    inputs["quad_order"] = cfg.quad_order;
  }
  if (cfg.command == "optimize") inputs["seed"] = cfg.seed;
  inputs["format"] = cfg.format;
  json doc = {{"command", cfg.command}, {"inputs", inputs}, {"results", json::object()}};
  doc["tolerances"] = {{"violation", kViolationTol},
                       {"table", kTableTol},
                       {"geometry", kGeometryTol}};
  return doc;
}

json cmd_hardy(const RunConfig& cfg) {
  const TestKind test = test_or(cfg, TestKind::Hardy);
  const LossModel loss(cfg.loss);
  const CorrelationTable ideal = joint_table(test, parse_overrides(cfg.overrides));
  const CorrelationTable observed = loss.rate() > 0.0 ? apply_loss(ideal, loss) : ideal;
  const HardyResiduals h = hardy_residuals(observed);
  const TestReport bound = hardy_bound_check(observed);
  json r = json::object();
  r["table"] = to_json(observed);
  json eps = json::array();
  for (double e : h.eps) eps.push_back(num(e));
  r["residuals"] = eps;
  r["p_pp_yy"] = num(observed(Y, Y, Outcome::Plus, Outcome::Plus));
  r["hardy_bound"] = to_json(bound);
  r["ch"] = to_json(ch_loss_value(ideal, loss));
  r["violated"] = bound.violated;
  return r;
}

json cmd_chsh(const RunConfig& cfg) {
  const TestKind test = test_or(cfg, TestKind::Chsh);
  const LossModel loss(cfg.loss);
  const CorrelationTable ideal = joint_table(test, parse_overrides(cfg.overrides));
  const TestReport ch = ch_loss_value(ideal, loss);
  json corr = json::object();
  for (Setting a : kSettings) {
    for (Setting b : kSettings) corr[setting_label(a, b)] = num(correlator(ideal, a, b));
  }
  json r = json::object();
  r["table"] = to_json(ideal);
  r["ch"] = to_json(ch);
  r["chsh_expectation"] = to_json(chsh_value(ideal));
  r["correlators"] = corr;
  r["violated"] = ch.violated;
  return r;
}

json cmd_i2233(const RunConfig& cfg) {
  const TestKind test = test_or(cfg, TestKind::Chsh);
  const LossModel loss(cfg.loss);
  const CorrelationTable ideal = joint_table(test, parse_overrides(cfg.overrides));
  const CorrelationTable observed = apply_loss(ideal, loss);
  const TestReport i2233 = i2233_loss_value(ideal, loss);
  const TestReport ch = ch_loss_value(ideal, loss);
  json r = json::object();
  r["table"] = to_json(observed);
  r["i2233"] = to_json(i2233);
  r["i2233_observed"] = to_json(i2233_value(observed));
  r["ch"] = to_json(ch);
  r["identity_residual"] =
      num(decomposition_identity_check(ideal, loss, RemainderMarginals::PlusX));
  r["identity_residual_minus_y"] =
      num(decomposition_identity_check(ideal, loss, RemainderMarginals::MinusY));
  r["ch_dominates"] = i2233.value <= ch.value + kViolationTol;
  r["violated"] = i2233.violated;
  return r;
}

HardyPoint parse_point(const std::vector<std::string>& args) {
  std::vector<std::string> parts;
  for (const std::string& a : args) {
    for (const std::string& p : split(a, ',')) parts.push_back(p);
  }
  if (parts.size() != 4) throw UsageError("membership expects 4 coordinates x,y,q,s");
  HardyPoint p;
  for (int i = 0; i < 4; ++i) p(i) = parse_number(parts[i], "coordinate");
  return p;
}

json cmd_polytope(const RunConfig& cfg) {
  json r = json::object();
  if (cfg.action == "vertices") {
    auto listing = [](const auto& vs) {
      json arr = json::array();
      for (const auto& v : vs) arr.push_back(vec_json(v));
      return json{{"count", vs.size()}, {"vertices", arr}};
    };
    r["causal"] = listing(causal_vertices());
    r["local"] = listing(local_vertices());
    r["hardy"] = listing(hardy_vertices());
    r["ch_variants"] = ch_variants().size();
  } else if (cfg.action == "membership") {
    const HardyPoint p = parse_point(cfg.action_args);
    const bool inside = hardy_membership(p);
    r["point"] = vec_json(p);
    r["inside"] = inside;
    if (inside) {
      const CorrelationVector v = hardy_embed(p);
      const double ch = hardy_facet_check(p);
      const LhvResult lhv = lhv_decompose(v);
      r["table"] = to_json(to_table(v));
      r["ch_value"] = num(ch);
      r["facet_saturating"] = std::abs(ch) <= kViolationTol;
      json cert = {{"feasible", lhv.feasible}};
      if (lhv.decomposition) cert["weights"] = vec_json(lhv.decomposition->weights);
      if (lhv.certificate) {
        cert["violated_variant"] = ch_variants()[*lhv.certificate].label;
        cert["violation"] = num(lhv.certificate_value);
      }
      r["lhv"] = cert;
    } else {
      json broken = json::array();
      for (const auto& c : validate_causal(hardy_table(p))) broken.push_back(c.description);
      r["violations"] = broken;
    }
  } else if (cfg.action == "cross-section") {
    if (cfg.action_args.size() != 1) throw UsageError("cross-section expects P(--|YY)");
    const double s = parse_number(cfg.action_args[0], "P(--|YY)");
    if (s < 0.0 || s > 1.0) throw UsageError("P(--|YY) must lie in [0, 1]");
    const CrossSection cs = cross_section(s, cfg.slices);
    json slices = json::array();
    for (const HardySlice& sl : cs.slices) {
      json verts = json::array();
      for (const auto& v : sl.vertices) verts.push_back(vec_json(v));
      slices.push_back({{"p_mp_yy", num(sl.p_mp_yy)}, {"vertices", verts}});
    }
    json segment = json::array();
    for (const auto& v : cs.segment) segment.push_back(vec_json(v));
    r["p_mm_yy"] = num(cs.p_mm_yy);
    r["slices"] = slices;
    r["segment"] = segment;
  } else {
    throw UsageError("polytope action must be vertices, membership or cross-section");
  }
  return r;
}

const char* status_name(BoundarySample::Status s) {
  switch (s) {
    case BoundarySample::Status::Found: return "found";
    case BoundarySample::Status::NoViolation: return "no_violation";
    case BoundarySample::Status::NoCrossing: return "no_crossing";
  }
  return "";
}

std::vector<BoundarySurface> sweep_surfaces(const RunConfig& cfg) {
  const std::vector<std::string> names = split(cfg.axes, ',');
  if (names.size() != 2) throw UsageError("--axes expects two angle names A,B");
  const auto a1 = parse_angle(names[0]);
  const auto a2 = parse_angle(names[1]);
  if (!a1 || !a2) throw UsageError("unknown angle in --axes: " + cfg.axes);
  const ThirdAxis third = cfg.third == "phi" ? ThirdAxis::CouplerPhase : ThirdAxis::Loss;
  try {
    validate_panel(*a1, *a2, third);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  BoundaryOptions opts;
  opts.grid = cfg.grid;
  opts.delta_max = cfg.delta_max;
  opts.order = cfg.quad_order;
  std::vector<TestKind> tests;
  if (cfg.test) {
    tests.push_back(test_or(cfg, TestKind::Hardy));
  } else {
    tests = {TestKind::Hardy, TestKind::Chsh};
  }
  std::vector<BoundarySurface> out;
  for (TestKind t : tests) out.push_back(violation_boundary(t, *a1, *a2, third, opts));
  return out;
}

json surface_json(const BoundarySurface& s) {
  json samples = json::array();
  for (const BoundarySample& b : s.samples) {
    samples.push_back({{"delta1", num(b.delta1)},
                       {"delta2", num(b.delta2)},
                       {"status", status_name(b.status)},
                       {"boundary", b.boundary ? num(*b.boundary) : json(nullptr)},
                       {"ch_at_boundary", b.ch_at_boundary ? num(*b.ch_at_boundary) : json(nullptr)}});
  }
  return {{"test", test_name(s.test)},
          {"axis1", angle_name(s.axis1)},
          {"axis2", angle_name(s.axis2)},
          {"third", s.third == ThirdAxis::Loss ? "loss" : "phi"},
          {"third_max", num(third_axis_max(s.third))},
          {"grid", s.options.grid},
          {"samples", samples}};
}

std::string surface_csv(const BoundarySurface& s) {
  std::string text = "axis1,axis2,axis3_boundary,averaged_ch_at_boundary\n";
  for (const BoundarySample& b : s.samples) {
    text += csv_num(b.delta1) + "," + csv_num(b.delta2) + "," + csv_num(b.boundary) + "," +
            csv_num(b.ch_at_boundary) + "\n";
  }
  return text;
}

json cmd_optimize(const RunConfig& cfg) {
  const TestKind test = test_or(cfg, TestKind::Chsh);
  const OptimizationResult res = optimize_angles(test, cfg.seed);
  json params = json::object();
  for (Setting a : kSettings) {
    for (Setting b : kSettings) params[setting_label(a, b)] = to_json(res.params[setting_index(a, b)]);
  }
  return {{"value", num(res.value)},
          {"best_start", res.best_start},
          {"starts", res.starts},
          {"evaluations", res.evaluations},
          {"params", params}};
}

std::string render(const RunConfig& cfg) {
  if (cfg.format == "csv" && cfg.command != "sweep") {
    throw UsageError("--format csv is only available for sweep");
  }
  if (cfg.command == "sweep") {
    if (cfg.format == "csv" && !cfg.test) throw UsageError("--format csv requires --test");
    const auto surfaces = sweep_surfaces(cfg);
    if (cfg.format == "csv") return surface_csv(surfaces.front());
    json doc = base_document(cfg);
    json arr = json::array();
    for (const auto& s : surfaces) arr.push_back(surface_json(s));
    doc["results"]["surfaces"] = arr;
    doc["tolerances"]["bisection"] = BoundaryOptions{}.tol;
    doc["tolerances"]["quad_order"] = cfg.quad_order;
    return doc.dump(2) + "\n";
  }
  json doc = base_document(cfg);
  if (cfg.command == "hardy") {
    doc["results"] = cmd_hardy(cfg);
  } else if (cfg.command == "chsh") {
    doc["results"] = cmd_chsh(cfg);
  } else if (cfg.command == "i2233") {
    doc["results"] = cmd_i2233(cfg);
  } else if (cfg.command == "polytope") {
    doc["results"] = cmd_polytope(cfg);
  } else if (cfg.command == "optimize") {
    doc["results"] = cmd_optimize(cfg);
  }
  return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled-interferometer Bell and Hardy tests", "nonlocal-lab"};
  app.require_subcommand(1);
  RunConfig cfg;

  app.add_option("--test", cfg.test, "hardy or chsh")->check(CLI::IsMember({"hardy", "chsh"}));
  app.add_option("--loss", cfg.loss, "loss rate per interferometer");
  app.add_option("--override", cfg.overrides, "NAME=DELTA offset added to every preset angle");
  app.add_option("--axes", cfg.axes, "fluctuating angle pair");
  app.add_option("--third", cfg.third, "third sweep axis")->check(CLI::IsMember({"loss", "phi"}));
  app.add_option("--delta-max", cfg.delta_max, "largest half-width on the grid");
  app.add_option("--grid", cfg.grid, "grid points per axis");
  app.add_option("--quad-order", cfg.quad_order, "Gauss-Legendre points per axis");
  app.add_option("--seed", cfg.seed, "optimizer seed");
  app.add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output file");
  app.add_option("--slices", cfg.slices, "slices per cross-section");
  app.fallthrough();

  app.add_subcommand("hardy", "Hardy residuals and verdict");
  app.add_subcommand("chsh", "CH/CHSH values");
  app.add_subcommand("i2233", "I2233 value and decomposition identity");
  CLI::App* poly = app.add_subcommand("polytope", "vertices, membership or cross-section");
  poly->add_option("action", cfg.action)->required();
  poly->add_option("args", cfg.action_args);
  app.add_subcommand("sweep", "violation boundary surfaces");
  app.add_subcommand("optimize", "multi-start angle optimization");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  std::string text;
  try {
    text = render(cfg);
  } catch (const UsageError& e) {
    err << "nonlocal-lab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "nonlocal-lab: " << e.what() << "\n";
    return kExitUsage;
  }

  if (cfg.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(cfg.out);
  file << text;
  file.close();
  if (!file) {
    err << "nonlocal-lab: cannot write " << cfg.out << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace nonlocal::cli
