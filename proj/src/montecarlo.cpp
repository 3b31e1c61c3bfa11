#include "fmmw/montecarlo.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <random>

#ifdef FMMW_HAVE_OPENMP
#include <omp.h>
#endif

#include "fmmw/errors.hpp"
#include "fmmw/interference.hpp"

namespace fmmw {

namespace {

struct Point {
  double x;
  double y;
};

std::vector<Point> sample_disk(double lambda, double radius, double cx, Rng& rng) {
  const double mean = lambda * kPi * radius * radius;
  std::vector<Point> out;
  if (!(mean > 0.0)) return out;
  const long n = std::poisson_distribution<long>(mean)(rng);
  out.reserve(static_cast<std::size_t>(n));
  // rejection from the bounding square, no trigonometry
  while (static_cast<long>(out.size()) < n) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    if (u * u + v * v < 1.0) out.push_back({cx + radius * u, radius * v});
  }
  return out;
}

// alpha log x: smaller means stronger average received power
double metric(double dist, Tier t, const PathlossModel& pl) { return pl.exponent(t) * std::log(dist); }

// Lower bound of the metric over both tiers at distance dist.
double metric_floor(double dist, const PathlossModel& pl) {
  const double l = std::log(dist);
  return l >= 0.0 ? std::min(pl.alpha_los, pl.alpha_nlos) * l : std::max(pl.alpha_los, pl.alpha_nlos) * l;
}

// Index of the candidate an observer at (ox, oy) associates with. Link states
// are drawn lazily, nearest first, until no remaining candidate can win.
template <class Pos>
std::size_t best_candidate(double ox, double oy, std::size_t n, Pos pos, const NetworkConfig& cfg,
                           const BlockageModel& blockage, Rng& rng, std::vector<double>& d2) {
  d2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [px, py] = pos(i);
    d2[i] = (px - ox) * (px - ox) + (py - oy) * (py - oy);
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t visited = 0; visited < n; ++visited) {
    std::size_t i = 0;
    double q = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      if (d2[k] < q) {
        q = d2[k];
        i = k;
      }
    if (q == std::numeric_limits<double>::infinity()) break;
    d2[i] = std::numeric_limits<double>::infinity();
    const double dist = std::sqrt(q);
    if (metric_floor(dist, cfg.pathloss) >= best) break;
    const Tier t = rng.uniform() < blockage.los_probability(dist) ? Tier::los : Tier::nlos;
    const double m = metric(dist, t, cfg.pathloss);
    if (m < best) {
      best = m;
      arg = i;
    }
  }
  return arg;
}

Transmitter make_transmitter(const Point& p, const NetworkConfig& cfg, const BlockageModel& blockage, Rng& rng) {
  Transmitter t;
  t.px = p.x;
  t.py = p.y;
  t.dist = std::hypot(p.x, p.y);
  t.tier = rng.uniform() < blockage.los_probability(t.dist) ? Tier::los : Tier::nlos;
  t.fading = sample_fading(t.tier, cfg.fading, rng);
  return t;
}

void point_at(Transmitter& t, double tx, double ty) {
  t.active = true;
  t.beam = std::atan2(ty - t.py, tx - t.px);
  t.served_dist = std::hypot(tx - t.px, ty - t.py);
}

void set_idle(Transmitter& t, IdlePolicy idle, Rng& rng) {
  t.served_dist = 0.0;
  t.active = idle == IdlePolicy::always;
  t.beam = kTwoPi * rng.uniform();
}

// Aims every transmitter other than the serving one at its own receiver.
void orient_beams(Realization& real, const NetworkConfig& cfg, Rng& rng, const SimOptions& opt) {
  const auto blockage = cfg.blockage();
  std::vector<double> scratch;
  auto& tx = real.tx;
  if (real.serving) point_at(tx[*real.serving], 0.0, 0.0);

  if (opt.receivers == ReceiverModel::full_pipeline) {
    const auto rx = sample_disk(cfg.lambda_rx, cfg.radius, real.offset, rng);
    std::vector<long> count(tx.size(), 0);
    std::vector<Point> chosen(tx.size());
    if (!tx.empty()) {
      for (const auto& p : rx) {
        const std::size_t j = best_candidate(
            p.x, p.y, tx.size(), [&](std::size_t i) { return std::pair{tx[i].px, tx[i].py}; }, cfg, blockage, rng,
            scratch);
        // uniform choice among a transmitter's receivers, one pass
        ++count[j];
        if (rng.uniform() * static_cast<double>(count[j]) < 1.0) chosen[j] = p;
      }
    }
    for (std::size_t j = 0; j < tx.size(); ++j) {
      if (real.serving && j == *real.serving) continue;
      if (count[j] > 0)
        point_at(tx[j], chosen[j].x, chosen[j].y);
      else
        set_idle(tx[j], opt.idle, rng);
    }
    return;
  }

  for (std::size_t j = 0; j < tx.size(); ++j) {
    if (real.serving && j == *real.serving) continue;
    std::vector<Point> rx;
    for (int attempt = 0; rx.empty(); ++attempt) {
      if (attempt == 1000) throw NonConvergence("orient_beams: active receiver process is always empty");
      rx = sample_disk(cfg.lambda_tx, cfg.radius, real.offset, rng);
    }
    const std::size_t k = best_candidate(
        tx[j].px, tx[j].py, rx.size(), [&](std::size_t i) { return std::pair{rx[i].x, rx[i].y}; }, cfg, blockage,
        rng, scratch);
    point_at(tx[j], rx[k].x, rx[k].y);
  }
}

void check_offset(const NetworkConfig& cfg, double d) {
  if (!(d >= 0.0) || d > cfg.radius) throw DomainError("simulation: receiver offset outside [0, D]");
}

}  // namespace

Realization sample_realization(const NetworkConfig& cfg, double d, Rng& rng, const SimOptions& opt) {
  check_offset(cfg, d);
  const auto blockage = cfg.blockage();
  Realization real;
  real.offset = d;
  for (const auto& p : sample_disk(cfg.lambda_tx, cfg.radius, d, rng)) {
    if (p.x == 0.0 && p.y == 0.0) continue;
    real.tx.push_back(make_transmitter(p, cfg, blockage, rng));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < real.tx.size(); ++i) {
    const double m = metric(real.tx[i].dist, real.tx[i].tier, cfg.pathloss);
    if (m < best) {
      best = m;
      real.serving = i;
    }
  }
  orient_beams(real, cfg, rng, opt);
  return real;
}

namespace {

// Gains toward the reference receiver, whose main lobe points at (sx, sy).
void accumulate_interference(const Realization& real, const NetworkConfig& cfg, double sx, double sy,
                             std::optional<std::size_t> skip, InterferenceSample& out) {
  const auto txp = cfg.tx_pattern();
  const auto rxp = cfg.rx_pattern();
  const double rx_dir = std::atan2(sy, sx);
  for (std::size_t j = 0; j < real.tx.size(); ++j) {
    if (skip && j == *skip) continue;
    const auto& t = real.tx[j];
    if (!t.active) continue;
    const double to_ref = std::atan2(-t.py, -t.px);
    const double g = txp.gain(to_ref - t.beam) * rxp.gain(std::atan2(t.py, t.px) - rx_dir);
    const double p = g * t.fading * std::pow(t.dist, -cfg.pathloss.exponent(t.tier));
    (t.tier == Tier::los ? out.los : out.nlos) += p;
  }
}

}  // namespace

SinrSample simulate_sinr(const Realization& real, const NetworkConfig& cfg) {
  SinrSample out;
  if (!real.serving) return out;
  const auto& s = real.tx[*real.serving];
  InterferenceSample inter;
  accumulate_interference(real, cfg, s.px, s.py, real.serving, inter);
  const double signal = cfg.gains().a1 * s.fading * std::pow(s.dist, -cfg.pathloss.exponent(s.tier));
  out.has_transmitter = true;
  out.tier = s.tier;
  out.serving_distance = s.dist;
  out.interference_los = inter.los;
  out.interference_nlos = inter.nlos;
  out.sinr = signal / (cfg.noise + inter.los + inter.nlos);
  return out;
}

SinrSample simulate_trial(const NetworkConfig& cfg, double d, std::uint64_t seed, std::uint64_t trial,
                          const SimOptions& opt) {
  Rng rng(seed, trial);
  return simulate_sinr(sample_realization(cfg, d, rng, opt), cfg);
}

InterferenceSample sample_conditional_interference(const NetworkConfig& cfg, double d, Tier serving, double r,
                                                   Rng& rng, const SimOptions& opt) {
  check_offset(cfg, d);
  const auto geom = cfg.geometry(d);
  if (!(r > 0.0) || r > geom.outer()) throw DomainError("sample_conditional_interference: r outside (0, D + d]");
  const auto blockage = cfg.blockage();

  // serving transmitter uniform on the part of the circle |z| = r inside the region
  const double half = (geom.centered() || r <= geom.inner()) ? kPi : varphi(r, geom);
  const double theta = half * (2.0 * rng.uniform() - 1.0);
  Realization real;
  real.offset = d;
  Transmitter s;
  s.px = r * std::cos(theta);
  s.py = r * std::sin(theta);
  s.dist = r;
  s.tier = serving;
  real.tx.push_back(s);
  real.serving = 0;

  const double ex_los = exclusion_radius(serving, Tier::los, r, cfg.pathloss);
  const double ex_nlos = exclusion_radius(serving, Tier::nlos, r, cfg.pathloss);
  for (const auto& p : sample_disk(cfg.lambda_tx, cfg.radius, d, rng)) {
    if (p.x == 0.0 && p.y == 0.0) continue;
    auto t = make_transmitter(p, cfg, blockage, rng);
    if (t.dist < (t.tier == Tier::los ? ex_los : ex_nlos)) continue;
    real.tx.push_back(t);
  }
  orient_beams(real, cfg, rng, opt);
  InterferenceSample out;
  accumulate_interference(real, cfg, s.px, s.py, real.serving, out);
  return out;
}

namespace {

struct Tally {
  std::vector<std::int64_t> hits;
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Runs fixed-size chunks of trials and merges them in chunk order, so the
// result does not depend on the thread count.
template <class Body>
Tally run_chunks(std::int64_t trials, const SimOptions& opt, std::size_t slots, bool parallel, Body body) {
  if (trials <= 0) throw DomainError("simulation: trial count must be positive");
  if (opt.chunk == 0) throw DomainError("simulation: chunk size must be positive");
  const auto chunk = static_cast<std::int64_t>(opt.chunk);
  const std::int64_t n_chunks = (trials + chunk - 1) / chunk;
  std::vector<Tally> parts(static_cast<std::size_t>(n_chunks));
  auto run = [&](std::int64_t c) {
    Tally& t = parts[static_cast<std::size_t>(c)];
    t.hits.assign(slots, 0);
    const std::int64_t end = std::min(trials, (c + 1) * chunk);
    for (std::int64_t i = c * chunk; i < end; ++i) body(static_cast<std::uint64_t>(i), t);
  };
  if (parallel) {
    std::exception_ptr failure;
#ifdef FMMW_HAVE_OPENMP
    const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#endif
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      try {
        run(c);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::int64_t c = 0; c < n_chunks; ++c) run(c);
  }
  Tally total;
  total.hits.assign(slots, 0);
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < slots; ++k) total.hits[k] += p.hits[k];
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  return total;
}

SimEstimate proportion(std::int64_t hits, std::int64_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

std::vector<SimEstimate> coverage_curve(const NetworkConfig& cfg, double d, std::span<const double> betas,
                                        std::int64_t trials, std::uint64_t seed, const SimOptions& opt, bool parallel) {
  cfg.validate();
  check_offset(cfg, d);
  for (double b : betas)
    if (!(b > 0.0)) throw DomainError("simulation: beta must be positive");
  const Tally t = run_chunks(trials, opt, betas.size(), parallel, [&](std::uint64_t i, Tally& acc) {
    const auto s = simulate_trial(cfg, d, seed, i, opt);
    if (!s.has_transmitter) return;
    for (std::size_t k = 0; k < betas.size(); ++k)
      if (s.sinr > betas[k]) ++acc.hits[k];
  });
  std::vector<SimEstimate> out;
  for (std::size_t k = 0; k < betas.size(); ++k) out.push_back(proportion(t.hits[k], trials));
  return out;
}

}  // namespace

std::vector<SimEstimate> estimate_coverage_curve(const NetworkConfig& cfg, double d, std::span<const double> betas,
                                                 std::int64_t trials, std::uint64_t seed, const SimOptions& opt) {
  return coverage_curve(cfg, d, betas, trials, seed, opt, true);
}

std::vector<SimEstimate> estimate_coverage_curve_serial(const NetworkConfig& cfg, double d,
                                                        std::span<const double> betas, std::int64_t trials,
                                                        std::uint64_t seed, const SimOptions& opt) {
  return coverage_curve(cfg, d, betas, trials, seed, opt, false);
}

SimEstimate estimate_coverage(const NetworkConfig& cfg, double d, double beta, std::int64_t trials, std::uint64_t seed,
                              const SimOptions& opt) {
  const double b[] = {beta};
  return estimate_coverage_curve(cfg, d, b, trials, seed, opt).front();
}

SimEstimate estimate_rate(const NetworkConfig& cfg, double d, std::int64_t trials, std::uint64_t seed,
                          const SimOptions& opt) {
  cfg.validate();
  check_offset(cfg, d);
  const Tally t = run_chunks(trials, opt, 0, true, [&](std::uint64_t i, Tally& acc) {
    const auto s = simulate_trial(cfg, d, seed, i, opt);
    if (!s.has_transmitter) return;
    const double v = cfg.bandwidth * std::log2(1.0 + s.sinr);
    acc.sum += v;
    acc.sum_sq += v * v;
  });
  const auto n = static_cast<double>(trials);
  const double mean = t.sum / n;
  const double var = trials > 1 ? std::max(0.0, (t.sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, 1.96 * std::sqrt(var / n), trials};
}

}  // namespace fmmw
