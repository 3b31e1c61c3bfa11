// fmmw: coverage and rate experiments for finite mmWave networks.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmmw/errors.hpp"
#include "fmmw/experiment.hpp"

#ifdef FMMW_HAVE_OPENMP
#include <omp.h>
#endif

using namespace fmmw;

namespace {

enum class Level { quiet, normal, verbose };

struct Flags {
  std::string config_file;
  std::vector<std::string> sets;
  std::string output;
  std::string svg;
  bool quiet = false;
  bool verbose = false;
  bool no_timing = false;
  bool dump_config = false;
  int threads = 0;
  std::optional<double> max_gap;
  // flag name -> config key, text kept for set_config_value
  std::vector<std::pair<std::string, std::optional<std::string>>> overrides;
};

void add_override(CLI::App& app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  f.overrides.emplace_back(key, std::nullopt);
  auto idx = f.overrides.size() - 1;
  app.add_option_function<std::string>(
      flag, [&f, idx](const std::string& v) { f.overrides[idx].second = v; }, help);
}

ExperimentConfig build_config(const Flags& f) {
  ExperimentConfig cfg = f.config_file.empty() ? ExperimentConfig{} : load_config(f.config_file);
  apply_environment(cfg);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, value] : f.overrides)
    if (value) set_config_value(cfg, key, *value);
  if (!f.output.empty()) cfg.output = f.output;
  return cfg;
}

void single_point(ExperimentConfig& cfg, SweepAxis axis, double x) {
  cfg.axis = axis;
  cfg.grid_from = cfg.grid_to = x;
  cfg.grid_step = 1.0;
}

int run(const std::string& command, const Flags& f) {
  const Level level = f.quiet ? Level::quiet : f.verbose ? Level::verbose : Level::normal;
  ExperimentConfig cfg = build_config(f);

  if (command == "coverage") {
    cfg.metric = Metric::coverage;
    single_point(cfg, SweepAxis::beta_db, cfg.beta_db);
  } else if (command == "rate") {
    cfg.metric = Metric::rate;
    single_point(cfg, SweepAxis::delta, cfg.delta);
  } else if (command == "simulate") {
    cfg.modes = {ResultMode::mc};
  } else if (command == "validate") {
    cfg.modes = {ResultMode::analytic, ResultMode::mc};
  }
  cfg.validate();

  if (f.dump_config) {
    std::cout << serialize_config(cfg);
    return 0;
  }

#ifdef FMMW_HAVE_OPENMP
  if (f.threads > 0) omp_set_num_threads(f.threads);
#endif
  RunOptions opt;
  opt.threads = f.threads;
  if (level == Level::verbose) opt.log = [](const std::string& s) { std::cerr << "fmmw: " << s << '\n'; };

  if (level != Level::quiet)
    std::cerr << "fmmw: " << command << ", " << to_string(cfg.metric) << " over " << to_string(cfg.axis) << " ("
              << cfg.grid().size() << " points)\n";
  const auto rows = run_experiment(cfg, opt);

  if (cfg.output.empty()) {
    write_csv(std::cout, rows, !f.no_timing);
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw std::runtime_error("cannot write '" + cfg.output + "'");
    write_csv(out, rows, !f.no_timing);
  }
  if (!f.svg.empty()) {
    std::ofstream out(f.svg);
    if (!out) throw std::runtime_error("cannot write '" + f.svg + "'");
    const std::string y = cfg.metric == Metric::rate ? "ergodic rate (Mbit/s)" : "coverage probability";
    write_svg(out, rows, {to_string(cfg.axis), y, std::string(to_string(cfg.metric)) + " vs " + to_string(cfg.axis)});
  }

  if (command == "validate") {
    double gap = 0.0, at = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
      const double g = std::abs(rows[i].value - rows[i + 1].value);
      if (g > gap) {
        gap = g;
        at = rows[i].axis_value;
      }
    }
    std::cerr << "fmmw: max |analytic - mc| = " << format_value(gap) << " at " << to_string(cfg.axis) << " = "
              << format_value(at) << '\n';
    if (f.max_gap && gap > *f.max_gap) {
      std::cerr << "fmmw: gap exceeds " << format_value(*f.max_gap) << '\n';
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage probability and ergodic rate of finite mmWave networks"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("-c,--config", f.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", f.sets, "override one configuration key (key=value)");
  app.add_option("-o,--output", f.output, "CSV output path (default: standard output)");
  app.add_option("--svg", f.svg, "also write a line plot to this path");
  app.add_flag("-q,--quiet", f.quiet, "no messages on standard error");
  app.add_flag("-v,--verbose", f.verbose, "progress messages on standard error");
  app.add_flag("--no-timing", f.no_timing, "leave the wall_ms column empty");
  app.add_flag("--dump-config", f.dump_config, "print the effective configuration and exit");
  app.add_option("--threads", f.threads, "worker threads (0: all)")->check(CLI::NonNegativeNumber);
  add_override(app, f, "--seed", "seed", "simulation seed");
  add_override(app, f, "--trials", "trials", "simulation trials per point");
  add_override(app, f, "--delta", "delta", "receiver offset as a fraction of the radius");
  add_override(app, f, "--beta-db", "beta_db", "SINR threshold in dB");
  add_override(app, f, "--axis", "axis", "swept quantity: beta_db, delta, theta_deg, mu, alpha_los");
  add_override(app, f, "--from", "grid_from", "first grid value");
  add_override(app, f, "--to", "grid_to", "last grid value");
  add_override(app, f, "--step", "grid_step", "grid spacing");
  add_override(app, f, "--modes", "modes", "comma-separated: analytic, mc, lower, upper");
  add_override(app, f, "--metric", "metric", "coverage or rate");

  std::string command;
  for (auto [name, help] : {std::pair{"coverage", "coverage at one threshold and offset"},
                            std::pair{"rate", "ergodic rate at one offset"},
                            std::pair{"sweep", "evaluate the configured modes over a grid"},
                            std::pair{"simulate", "Monte Carlo estimates over a grid"},
                            std::pair{"validate", "analysis next to simulation, with the largest gap"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&command, n = std::string(name)] { command = n; });
    if (std::string(name) == "validate") sub->add_option("--max-gap", f.max_gap, "fail when the gap exceeds this");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(command, f);
  } catch (const ConfigError& e) {
    std::cerr << "fmmw: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "fmmw: integration did not converge: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "fmmw: " << e.what() << '\n';
    return 1;
  }
}
