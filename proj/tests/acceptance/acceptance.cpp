// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmmw/analysis.hpp"
#include "fmmw/montecarlo.hpp"
#include "fmmw/quadrature.hpp"
#include "unit/oracles.hpp"

using namespace fmmw;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> range(double from, double to, double step) {
  std::vector<double> out;
  for (int i = 0; from + i * step <= to + 1e-9 * step; ++i) out.push_back(from + i * step);
  return out;
}

const std::vector<double>& beta_grid_db() {
  static const auto g = range(-10.0, 30.0, 2.0);
  return g;
}

// total measures reach the disk area, and the tier measures add to it at the farthest point
Outcome measure_conservation() {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double D = 5.0 + 195.0 * u(gen);
    const double d = D * u(gen);
    const double mu = 0.5 * u(gen);
    const DiskMeasures m(DiskGeometry(D, d), BlockageModel::exponential(mu));
    const double area = kPi * D * D;
    worst = std::max(worst, std::abs(m.total(Tier::los) + m.total(Tier::nlos) - area) / area);
    const double far = m.measure(Tier::los, D + d) + m.measure(Tier::nlos, D + d);
    worst = std::max(worst, std::abs(far - area) / area);
  }
  return {worst <= 1e-8, "max relative error " + fmt("%.2e", worst) + " over 100 draws"};
}

Outcome association_sum_rule() {
  std::mt19937_64 gen(202);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_sum = 0.0, worst_mass = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double D = 20.0 + 80.0 * u(gen);
    const double d = D * u(gen);
    const double mu = 0.01 + 0.2 * u(gen);
    const double lam = 1e-4 + 0.01 * u(gen);
    const double al = 1.5 + 1.5 * u(gen);
    const double an = al + 0.2 + 2.5 * u(gen);
    const ServingDistribution sd(lam, DiskMeasures(DiskGeometry(D, d), BlockageModel::exponential(mu)),
                                 PathlossModel(al, an));
    worst_sum = std::max(worst_sum, std::abs(sd.association(Tier::los) + sd.association(Tier::nlos) +
                                             std::expm1(-lam * kPi * D * D)));
    for (Tier t : {Tier::los, Tier::nlos}) {
      if (sd.association(t) < 1e-12) continue;
      quad::IntegrationSpec s;
      s.lower = 0.0;
      s.upper = sd.support_end();
      s.rel_tol = 1e-10;
      s.abs_tol = 1e-14;
      s.max_subdivisions = 4000;
      s.breakpoints = sd.breakpoints(t);
      const double mass = quad::integrate_1d([&](double r) { return sd.pdf(t, r); }, s);
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
  }
  return {worst_sum <= 1e-6 && worst_mass <= 1e-4,
          "sum rule error " + fmt("%.2e", worst_sum) + ", pdf mass error " + fmt("%.2e", worst_mass)};
}

Outcome threshold_curves(std::int64_t trials) {
  const NetworkConfig cfg;
  const CoverageAnalyzer an(cfg);
  std::vector<double> betas;
  for (double db : beta_grid_db()) betas.push_back(db_to_linear(db));
  double worst = 0.0, worst_delta = 0.0, worst_db = 0.0;
  std::ostringstream per;
  for (double delta : {0.2, 0.6, 0.8}) {
    const double d = delta * cfg.radius;
    const auto mc = estimate_coverage_curve(cfg, d, betas, trials, 3000 + static_cast<int>(10 * delta));
    double gap = 0.0;
    for (std::size_t k = 0; k < betas.size(); ++k) {
      const double g = std::abs(mc[k].mean - an.coverage({betas[k], d}).p_cover);
      gap = std::max(gap, g);
      if (g > worst) {
        worst = g;
        worst_delta = delta;
        worst_db = beta_grid_db()[k];
      }
    }
    per << " delta=" << delta << ":" << fmt("%.4f", gap);
  }
  return {worst <= 0.03, "max |analytic-mc| " + fmt("%.4f", worst) + " at delta " + fmt("%.1f", worst_delta) +
                             ", beta " + fmt("%.0f", worst_db) + " dB (" + std::to_string(trials) +
                             " trials;" + per.str() + ")"};
}

Outcome offset_trend() {
  const CoverageAnalyzer an{NetworkConfig{}};
  const auto deltas = range(0.0, 1.0, 0.05);
  bool ok = true;
  std::ostringstream out;
  for (double db : {5.0, 10.0}) {
    std::vector<CoverageQuery> qs;
    for (double x : deltas) qs.push_back({db_to_linear(db), x * 50.0});
    const auto res = an.coverage_grid(qs);
    std::size_t best = 0;
    for (std::size_t i = 0; i < res.size(); ++i)
      if (res[i].p_cover > res[best].p_cover) best = i;
    const bool interior = best > 0 && best + 1 < res.size();
    const bool in_band = deltas[best] >= 0.8 - 1e-9 && deltas[best] <= 1.0 + 1e-9;
    ok = ok && interior && in_band;
    out << "beta " << db << " dB: argmax delta " << fmt("%.2f", deltas[best]) << " (" << fmt("%.4f", res[best].p_cover)
        << (interior ? ", interior" : ", endpoint") << "); ";
  }
  return {ok, out.str()};
}

Outcome beamwidth_trend() {
  bool ok = true;
  std::ostringstream out;
  std::vector<std::vector<double>> values(2);
  for (double deg : {6.0, 36.0, 90.0, 200.0}) {
    NetworkConfig cfg;
    cfg.beam_tx = cfg.beam_rx = deg_to_rad(deg);
    const CoverageAnalyzer an(cfg);
    values[0].push_back(an.coverage({db_to_linear(5.0), 20.0}).p_cover);
    values[1].push_back(an.coverage({db_to_linear(10.0), 20.0}).p_cover);
  }
  for (int b = 0; b < 2; ++b) {
    out << "beta " << (b ? 10 : 5) << " dB:";
    for (std::size_t i = 0; i < values[b].size(); ++i) {
      out << ' ' << fmt("%.4f", values[b][i]);
      if (i > 0 && !(values[b][i] < values[b][i - 1])) ok = false;
    }
    out << "; ";
  }
  return {ok, out.str()};
}

Outcome blockage_trend() {
  const auto mus = range(0.01, 0.3, 0.01);
  bool ok = true;
  std::ostringstream out;
  for (double db : {5.0, 10.0}) {
    const auto sweep = blockage_sweep(mus, {db_to_linear(db), 20.0}, NetworkConfig{});
    ok = ok && sweep.best.x >= 0.055 - 1e-12 && sweep.best.x <= 0.095 + 1e-12;
    out << "beta " << db << " dB: argmax mu " << fmt("%.3f", sweep.best.x) << " (" << fmt("%.4f", sweep.best.value)
        << "); ";
  }
  return {ok, out.str()};
}

Outcome bound_tightness() {
  bool sandwich = true;
  double gap_lo[2] = {0, 0}, gap_hi[2] = {0, 0};
  int idx = 0;
  for (double deg : {6.0, 200.0}) {
    NetworkConfig cfg;
    cfg.beam_tx = cfg.beam_rx = deg_to_rad(deg);
    const CoverageAnalyzer an(cfg);
    for (double db : beta_grid_db()) {
      const double b = db_to_linear(db);
      const double lo = an.coverage({b, 20.0, CoverageMode::lower_bound}).p_cover;
      const double ex = an.coverage({b, 20.0}).p_cover;
      const double hi = an.coverage({b, 20.0, CoverageMode::upper_bound}).p_cover;
      sandwich = sandwich && lo <= ex + 1e-6 && ex <= hi + 1e-6;
      gap_lo[idx] = std::max(gap_lo[idx], ex - lo);
      gap_hi[idx] = std::max(gap_hi[idx], hi - ex);
    }
    ++idx;
  }
  const bool narrow = gap_hi[0] < 0.25 * gap_lo[0];
  const bool wide = gap_lo[1] < 0.25 * gap_hi[1];
  std::ostringstream out;
  out << (sandwich ? "sandwich holds" : "sandwich violated") << "; 6 deg: lower gap " << fmt("%.4f", gap_lo[0])
      << ", upper gap " << fmt("%.4f", gap_hi[0]) << (narrow ? " (upper tight)" : " (upper not tight)")
      << "; 200 deg: lower gap " << fmt("%.4f", gap_lo[1]) << ", upper gap " << fmt("%.4f", gap_hi[1])
      << (wide ? " (lower tight)" : " (lower not tight)");
  return {sandwich && narrow && wide, out.str()};
}

Outcome rate_offsets() {
  const std::vector<double> deltas = {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 1.0};
  bool ok = true;
  std::ostringstream out;
  for (auto [al, target] : {std::pair{1.5, 250.0}, std::pair{2.5, 100.0}}) {
    NetworkConfig cfg;
    cfg.pathloss = PathlossModel(al, 4.0);
    const CoverageAnalyzer an(cfg);
    std::vector<double> offsets;
    for (double x : deltas) offsets.push_back(x * cfg.radius);
    auto rates = an.ergodic_rate_grid(offsets);
    for (double& r : rates) r /= 1e6;
    const double diff = rates.front() - rates.back();
    const auto best = static_cast<std::size_t>(std::max_element(rates.begin(), rates.end()) - rates.begin());
    const bool interior = best > 0 && best + 1 < rates.size();
    const bool close = std::abs(diff - target) <= 0.2 * target;
    ok = ok && interior && close;
    out << "alpha_los " << al << ": centre-edge " << fmt("%.1f", diff) << " Mbit/s (target " << target
        << "), max at delta " << deltas[best] << (interior ? " (interior)" : " (endpoint)") << " [";
    for (std::size_t i = 0; i < rates.size(); ++i) out << (i ? " " : "") << fmt("%.1f", rates[i]);
    out << "]";
    if (al == 1.5) {
      // simulation cross-check of the two ends
      const auto c = estimate_rate(cfg, 0.0, 20'000, 41);
      const auto e = estimate_rate(cfg, cfg.radius, 20'000, 42);
      out << " mc centre " << fmt("%.1f", c.mean / 1e6) << "+-" << fmt("%.1f", c.half_width_95 / 1e6) << ", edge "
          << fmt("%.1f", e.mean / 1e6) << "+-" << fmt("%.1f", e.half_width_95 / 1e6);
    }
    out << "; ";
  }
  return {ok, out.str()};
}

// Simulation oracles not already run by the unit suites, at 1e5 trials.
Outcome simulation_oracles() {
  std::ostringstream out;
  bool ok = true;

  {  // analysis next to simulation at delta = 2/5
    const NetworkConfig cfg;
    const CoverageAnalyzer an(cfg);
    std::vector<double> betas;
    for (double db : beta_grid_db()) betas.push_back(db_to_linear(db));
    const auto mc = estimate_coverage_curve(cfg, 20.0, betas, 100'000, 909);
    double gap = 0.0;
    for (std::size_t k = 0; k < betas.size(); ++k)
      gap = std::max(gap, std::abs(mc[k].mean - an.coverage({betas[k], 20.0}).p_cover));
    ok = ok && gap <= 0.02;
    out << "validate gap " << fmt("%.4f", gap) << (gap <= 0.02 ? " ok" : " FAIL");
  }

  {  // blockage curve against simulation at five exponents
    double gap = 0.0;
    for (double mu : {0.02, 0.05, 0.075, 0.1, 0.2}) {
      NetworkConfig cfg;
      cfg.mu = mu;
      const double b = db_to_linear(10.0);
      const double mc = estimate_coverage(cfg, 20.0, b, 100'000, 777).mean;
      gap = std::max(gap, std::abs(mc - coverage({b, 20.0}, cfg).p_cover));
    }
    ok = ok && gap <= 0.02;
    out << "; blockage curve gap " << fmt("%.4f", gap) << (gap <= 0.02 ? " ok" : " FAIL");
  }

  {  // served distance of a transmitter at offset 20 under the full association pipeline
    const NetworkConfig cfg;
    oracle::Scenario sc;
    const double dh = 20.0;
    std::mt19937_64 gen(313);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int bins = 70;
    std::vector<double> obs(bins, 0.0);
    int n = 0;
    while (n < 100'000) {
      auto tx = oracle::ppp_disk(gen, cfg.lambda_tx, cfg.radius, 0.0);
      tx.push_back({dh, 0.0});
      const auto rx = oracle::ppp_disk(gen, cfg.lambda_rx, cfg.radius, 0.0);
      int count = 0;
      oracle::Point pick{0.0, 0.0};
      for (const auto& p : rx) {
        const auto b = oracle::associate(gen, p, tx, sc);
        if (b.x == dh && b.y == 0.0 && u(gen) * ++count < 1.0) pick = p;
      }
      if (!count) continue;
      ++n;
      obs[std::min(bins - 1, static_cast<int>(std::hypot(pick.x - dh, pick.y)))] += 1.0;
    }
    std::vector<double> probs(bins, 0.0);
    for (int i = 0; i < bins; ++i)
      for (int k = 0; k < 20; ++k) probs[i] += served_distance_pdf(dh, i + (k + 0.5) / 20.0, cfg) / 20.0;
    const double p = oracle::chi_square_pvalue(obs, probs, n);
    double mean_obs = 0.0, mean_pdf = 0.0;
    for (int i = 0; i < bins; ++i) {
      mean_obs += (i + 0.5) * obs[i] / n;
      mean_pdf += (i + 0.5) * probs[i];
    }
    ok = ok && p > 0.01;
    out << "; full-pipeline served distance chi-square p " << fmt("%.3g", p) << " (mean " << fmt("%.3f", mean_obs)
        << " vs " << fmt("%.3f", mean_pdf) << ")" << (p > 0.01 ? " ok" : " FAIL");
  }
  out << "; remaining oracles run in the unit suites";
  return {ok, out.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility(const std::string& cli) {
  bool ok = true;
  std::ostringstream out;
  std::vector<std::string> files;
  for (int threads : {1, 2, 4, 1}) {
    const std::string file = "acceptance_simulate_" + std::to_string(files.size()) + ".csv";
    const std::string cmd = "\"" + cli + "\" simulate --from -10 --to 30 --step 10 --delta 0.4 --trials 20000 " +
                            "--seed 11 --no-timing -q --threads " + std::to_string(threads) + " -o " + file;
    if (std::system(cmd.c_str()) != 0) return {false, "simulate invocation failed: " + cmd};
    files.push_back(slurp(file));
    std::remove(file.c_str());
  }
  for (const auto& f : files) ok = ok && f == files.front() && !f.empty();
  out << "CLI output " << (ok ? "identical" : "differs") << " across 4 runs (threads 1, 2, 4, 1)";

  const NetworkConfig cfg;
  const std::vector<double> betas = {1.0, 10.0, 100.0};
  SimOptions a, b;
  a.chunk = 512;
  b.chunk = 3000;
  b.threads = 3;
  const auto x = estimate_coverage_curve(cfg, 30.0, betas, 12'000, 5, a);
  const auto y = estimate_coverage_curve(cfg, 30.0, betas, 12'000, 5, b);
  const auto z = estimate_coverage_curve_serial(cfg, 30.0, betas, 12'000, 5, a);
  bool lib = true;
  for (std::size_t k = 0; k < betas.size(); ++k)
    lib = lib && x[k].mean == y[k].mean && x[k].mean == z[k].mean && x[k].half_width_95 == y[k].half_width_95;
  out << "; library estimates " << (lib ? "identical" : "differ") << " across chunkings, workers and the serial path";
  return {ok && lib, out.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::int64_t trials = 1'000'000;
  std::string cli = FMMW_CLI_PATH;
  std::vector<int> only;
  app.add_option("--trials", trials, "simulation trials per threshold curve for criterion 3");
  app.add_option("--cli", cli, "path of the command-line tool");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"measure conservation", measure_conservation},
      {"association sum rule and pdf normalization", association_sum_rule},
      {"threshold curves, analysis vs simulation", [&] { return threshold_curves(trials); }},
      {"coverage vs offset has an interior optimum near the edge", offset_trend},
      {"coverage decreases with beamwidth", beamwidth_trend},
      {"optimal blockage exponent", blockage_trend},
      {"bound tightness", bound_tightness},
      {"centre vs edge ergodic rate", rate_offsets},
      {"simulation oracles", simulation_oracles},
      {"simulation reproducibility", [&] { return reproducibility(cli); }},
  };

  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " -- "
              << o.detail << " [" << fmt("%.1f", secs) << " s]" << std::endl;
  }
  std::cout << "acceptance: " << failed << " of " << (selected.empty() ? criteria.size() : selected.size())
            << " criteria failed" << std::endl;
  return failed ? 1 : 0;
}
