#include "fmmw/experiment.hpp"

#include <chrono>
#include <map>
#include <memory>

#include "fmmw/analysis.hpp"
#include "fmmw/montecarlo.hpp"

namespace fmmw {

ExperimentConfig at_axis_value(const ExperimentConfig& cfg, double x) {
  ExperimentConfig c = cfg;
  switch (cfg.axis) {
    case SweepAxis::beta_db: c.beta_db = x; break;
    case SweepAxis::delta: c.delta = x; break;
    case SweepAxis::theta_deg: c.theta_tx_deg = c.theta_rx_deg = x; break;
    case SweepAxis::mu: c.mu = x; break;
    case SweepAxis::alpha_los: c.alpha_los = x; break;
  }
  return c;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

CoverageMode coverage_mode(ResultMode m) {
  switch (m) {
    case ResultMode::lower: return CoverageMode::lower_bound;
    case ResultMode::upper: return CoverageMode::upper_bound;
    default: return CoverageMode::exact;
  }
}

AnalysisOptions analysis_options(const ExperimentConfig& cfg) {
  AnalysisOptions o;
  o.rel_tol = cfg.rel_tol;
  o.interference.rel_tol = cfg.lt_tol;
  return o;
}

SimOptions sim_options(const ExperimentConfig& cfg, const RunOptions& run) {
  SimOptions o;
  o.receivers = cfg.receivers;
  o.idle = cfg.idle;
  o.threads = run.threads;
  return o;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const auto grid = cfg.grid();
  const bool shared_network = cfg.axis == SweepAxis::beta_db || cfg.axis == SweepAxis::delta;
  const bool rate = cfg.metric == Metric::rate;
  auto log = [&](const std::string& s) {
    if (opt.log) opt.log(s);
  };

  // results[(point, mode)]
  std::map<std::pair<std::size_t, ResultMode>, ResultRow> results;
  auto put = [&](std::size_t i, ResultMode m, double value, std::optional<double> ci, double ms) {
    results[{i, m}] = ResultRow{grid[i], m, value, ci, ms};
  };

  std::shared_ptr<const CoverageAnalyzer> shared;
  if (shared_network) shared = std::make_shared<CoverageAnalyzer>(cfg.network(), analysis_options(cfg));

  // Analytic modes. Points sharing one network go through the grid evaluators.
  for (ResultMode m : cfg.modes) {
    if (m == ResultMode::mc) continue;
    if (shared) {
      const auto t0 = Clock::now();
      std::vector<double> values;
      if (rate) {
        std::vector<double> offsets;
        for (double x : grid) offsets.push_back(at_axis_value(cfg, x).delta * cfg.radius);
        values = shared->ergodic_rate_grid(offsets, coverage_mode(m));
        for (double& v : values) v /= 1e6;
      } else {
        std::vector<CoverageQuery> qs;
        for (double x : grid) {
          const auto c = at_axis_value(cfg, x);
          qs.push_back({db_to_linear(c.beta_db), c.delta * cfg.radius, coverage_mode(m)});
        }
        for (const auto& r : shared->coverage_grid(qs)) values.push_back(r.p_cover);
      }
      const double ms = ms_since(t0) / static_cast<double>(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) put(i, m, values[i], std::nullopt, ms);
      log(std::string(to_string(m)) + ": " + std::to_string(grid.size()) + " points");
      continue;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto t0 = Clock::now();
      const auto c = at_axis_value(cfg, grid[i]);
      const CoverageAnalyzer an(c.network(), analysis_options(c));
      const double d = c.delta * c.radius;
      const double v = rate ? an.ergodic_rate(d, coverage_mode(m)) / 1e6
                            : an.coverage({db_to_linear(c.beta_db), d, coverage_mode(m)}).p_cover;
      put(i, m, v, std::nullopt, ms_since(t0));
      log(std::string(to_string(m)) + " at " + format_value(grid[i]) + ": " + format_value(v));
    }
  }

  if (cfg.wants(ResultMode::mc)) {
    const auto sim = sim_options(cfg, opt);
    if (cfg.axis == SweepAxis::beta_db && !rate) {
      // every threshold from the same realizations
      const auto t0 = Clock::now();
      std::vector<double> betas;
      for (double x : grid) betas.push_back(db_to_linear(x));
      const auto est =
          estimate_coverage_curve(cfg.network(), cfg.delta * cfg.radius, betas, cfg.trials, cfg.seed, sim);
      const double ms = ms_since(t0) / static_cast<double>(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) put(i, ResultMode::mc, est[i].mean, est[i].half_width_95, ms);
      log("mc: " + std::to_string(cfg.trials) + " trials over " + std::to_string(grid.size()) + " thresholds");
    } else {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto t0 = Clock::now();
        const auto c = at_axis_value(cfg, grid[i]);
        const double d = c.delta * c.radius;
        auto est = rate ? estimate_rate(c.network(), d, c.trials, c.seed, sim)
                        : estimate_coverage(c.network(), d, db_to_linear(c.beta_db), c.trials, c.seed, sim);
        if (rate) {
          est.mean /= 1e6;
          est.half_width_95 /= 1e6;
        }
        put(i, ResultMode::mc, est.mean, est.half_width_95, ms_since(t0));
        log("mc at " + format_value(grid[i]) + ": " + format_value(est.mean));
      }
    }
  }

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (ResultMode m : cfg.modes) rows.push_back(results.at({i, m}));
  return rows;
}

}  // namespace fmmw
