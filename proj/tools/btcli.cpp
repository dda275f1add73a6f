#include "bt/moy_prasad.hpp"
#include "bt/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace bt;
using runner::json;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> checks;
  bool strict = false;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config file (default from BT_CONFIG)");
  app->add_option("--check", c.checks, "check ids to run");
  app->add_flag("--strict", c.strict, "treat skipped checks as failures");
  app->add_option("--out", c.out, "output path (default stdout)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

runner::RunConfig load_config(const Common& c) {
  std::string path = c.config_path;
  if (path.empty())
    if (const char* env = std::getenv("BT_CONFIG")) path = env;
  if (path.empty()) return runner::default_config();
  std::ifstream in(path);
  if (!in) throw runner::ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw runner::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return runner::parse_config(j);
}

void write_out(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + c.out);
}

int run_checks(const Common& c, const std::vector<std::string>& allowed) {
  auto cfg = load_config(c);
  std::vector<std::string> ids;
  if (!c.checks.empty()) {
    for (const auto& id : c.checks) {
      runner::find_check(id);
      if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), id) == allowed.end())
        throw runner::ConfigError("check '" + id + "' does not belong to this verb");
      ids.push_back(id);
    }
  } else if (allowed.empty()) {
    ids = cfg.checks_given ? cfg.checks : runner::all_check_ids();
  } else {
    ids = allowed;
  }
  cfg.checks = ids;
  cfg.checks_given = true;
  auto reports = runner::run_suite(cfg);
  write_out(c, c.format == "csv" ? runner::emit_csv(reports, cfg.timing) : runner::emit_json(reports, cfg.timing));
  return runner::exit_code(reports, c.strict);
}

Point parse_point(const std::string& s) {
  Point p;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) p.push_back(parse_q(item));
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bruhat-Tits apartment, projector and Fourier checks"};
  app.require_subcommand(1);
  Common common;

  auto* apartment = app.add_subcommand("apartment", "partition of unity and Upsilon finiteness");
  add_common(apartment, common);

  auto* verify = app.add_subcommand("verify", "combinatorial checks");
  verify->require_subcommand(1);
  std::vector<std::pair<std::string, std::string>> verify_map = {{"stab", "stab"}, {"euler", "euler"}, {"convex", "convex"}};
  for (const auto& [name, id] : verify_map) add_common(verify->add_subcommand(name, "run the " + id + " check"), common);

  auto* sl2 = app.add_subcommand("sl2", "p-adic SL2 checks");
  sl2->require_subcommand(1);
  std::vector<std::pair<std::string, std::string>> sl2_map = {
      {"convolve", "equal"}, {"projector", "projector"}, {"rlog-check", "rlog"}, {"indicator-check", "indicator"}};
  for (const auto& [name, id] : sl2_map) add_common(sl2->add_subcommand(name, "run the " + id + " check"), common);

  auto* fourier = app.add_subcommand("fourier", "Fourier identities on the finite Lie model");
  add_common(fourier, common);
  auto* steinberg = app.add_subcommand("steinberg", "finite Steinberg suite");
  add_common(steinberg, common);
  auto* suite = app.add_subcommand("suite", "every check selected by the config");
  add_common(suite, common);

  auto* mp = app.add_subcommand("mp", "Moy-Prasad filtration data");
  mp->require_subcommand(1);
  std::string system = "A1", point = "0", depth = "0", kind = "lattice", valuation, out_mp;
  int level = 1, delta = 0;
  bool strict_spec = false;
  long long torus = -1;
  auto mp_common = [&](CLI::App* a) {
    a->add_option("--system", system, "root system");
    a->add_option("--delta", delta, "BC1 parity");
    a->add_option("--out", out_mp, "output path");
  };
  auto* mp_spec = mp->add_subcommand("spec", "thresholds of g_{x,r}");
  mp_common(mp_spec);
  mp_spec->add_option("--x", point, "point, comma separated rationals");
  mp_spec->add_option("--r", depth, "depth");
  mp_spec->add_flag("--plus", strict_spec, "use g_{x,r+}");
  auto* mp_region = mp->add_subcommand("region", "cells whose filtration contains a valuation vector");
  mp_common(mp_region);
  mp_region->add_option("--m", level, "refinement");
  mp_region->add_option("--r", depth, "depth");
  mp_region->add_option("--valuation", valuation, "per-root valuations, 'inf' for zero")->required();
  mp_region->add_option("--torus", torus, "torus valuation, omitted means zero");
  mp_region->add_option("--kind", kind, "lattice or dual")->check(CLI::IsMember({"lattice", "dual"}));
  auto* mp_jumps = mp->add_subcommand("jumps", "depths in [0,1) where the filtration jumps");
  mp_common(mp_jumps);
  mp_jumps->add_option("--x", point, "point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (apartment->parsed()) return run_checks(common, {"unity", "finite"});
    for (const auto& [name, id] : verify_map)
      if (verify->got_subcommand(name)) return run_checks(common, {id});
    for (const auto& [name, id] : sl2_map)
      if (sl2->got_subcommand(name)) return run_checks(common, {id});
    if (fourier->parsed()) return run_checks(common, {"fourier"});
    if (steinberg->parsed()) return run_checks(common, {"steinberg"});
    if (suite->parsed()) return run_checks(common, {});

    auto spec = make_root_system(system, delta);
    json out;
    if (mp_spec->parsed()) {
      Point x = parse_point(point);
      Q r = parse_q(depth);
      out = json::parse(to_json_string(lattice_spec(spec, x, r, strict_spec), spec));
      out["x"] = runner::json::array();
      for (const auto& c : x) out["x"].push_back(to_string(c));
      out["r"] = to_string(r);
      out["dual"] = json::parse(to_json_string(dual_spec(spec, x, r), spec));
    } else if (mp_region->parsed()) {
      ValuationVector v;
      if (torus >= 0) v.torus = torus;
      std::stringstream ss(valuation);
      std::string item;
      while (std::getline(ss, item, ',')) v.per_root.push_back(item == "inf" ? std::nullopt : std::optional<long long>(std::stoll(item)));
      Window w;
      for (int i = 0; i < spec.rank; ++i) w.bounds.push_back({Q(-2), Q(2)});
      Apartment apt(spec, level, w);
      auto reg = region(apt, v, parse_q(depth), kind == "lattice" ? RegionKind::lattice : RegionKind::dual);
      out["cells"] = json::array();
      for (const auto& c : reg) out["cells"].push_back(to_string(c));
      out["convex"] = is_convex(apt.arrangement(), reg);
    } else if (mp_jumps->parsed()) {
      out["radii"] = json::array();
      for (const auto& q : jump_radii(spec, parse_point(point))) out["radii"].push_back(to_string(q));
    }
    Common c;
    c.out = out_mp;
    write_out(c, out.dump(2) + "\n");
    return 0;
  } catch (const runner::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
