#include "fmmw/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace fmmw {

const char* to_string(CoverageMode m) {
  switch (m) {
    case CoverageMode::exact: return "exact";
    case CoverageMode::lower_bound: return "lower";
    case CoverageMode::upper_bound: return "upper";
  }
  return "?";
}

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Neumaier-compensated accumulator; the alternating sum cancels mildly.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

CoverageAnalyzer::CoverageAnalyzer(const NetworkConfig& cfg, AnalysisOptions opt) : cfg_(cfg), opt_(opt) {
  cfg_.validate();
  model_ = std::make_shared<const InterferenceModel>(cfg_, opt_.interference);
}

std::shared_ptr<const ServingDistribution> CoverageAnalyzer::serving(double d) const {
  return cache_.get(cfg_.lambda_tx, DiskMeasures(cfg_.geometry(d), cfg_.blockage()), cfg_.pathloss);
}

double CoverageAnalyzer::coverage_at_distance(Tier tier, double r, const CoverageQuery& q) const {
  const int v = cfg_.fading.order(tier);
  const double eta = v * std::pow(std::tgamma(v + 1.0), -1.0 / v);
  const double a1 = model_->config().gains().a1;
  const double base = eta * q.beta * std::pow(r, cfg_.pathloss.exponent(tier)) / a1;
  Compensated sum;
  for (int n = 1; n <= v; ++n) {
    const double s = base * n;
    double lt = 0.0;
    switch (q.mode) {
      case CoverageMode::exact:
        lt = model_->laplace_exponent(tier, Tier::los, s, r, q.d) + model_->laplace_exponent(tier, Tier::nlos, s, r, q.d);
        lt = std::exp(-lt);
        break;
      case CoverageMode::lower_bound:
      case CoverageMode::upper_bound: {
        const auto kind = q.mode == CoverageMode::lower_bound ? BoundKind::lower : BoundKind::upper;
        lt = model_->laplace_transform_bound(kind, tier, Tier::los, s, r, q.d) *
             model_->laplace_transform_bound(kind, tier, Tier::nlos, s, r, q.d);
        break;
      }
    }
    const double term = binomial(v, n) * std::exp(-s * cfg_.noise) * lt;
    sum.add(n % 2 == 1 ? term : -term);
  }
  return sum.value();
}

double CoverageAnalyzer::joint_coverage(Tier tier, const CoverageQuery& q, const ServingDistribution& sd) const {
  if (!(sd.association(tier) > 1e-300)) return 0.0;
  const auto& g = sd.measures().geometry();
  quad::IntegrationSpec spec;
  spec.lower = 0.0;
  spec.upper = g.outer();
  spec.rel_tol = opt_.rel_tol;
  spec.abs_tol = 1e-9;
  spec.max_subdivisions = 400;
  spec.breakpoints = sd.breakpoints(tier);
  if (g.inner() > 0.0) spec.breakpoints.push_back(g.inner());
  return quad::integrate_1d(
      [&](double r) {
        const double w = sd.joint_density(tier, r);
        return w == 0.0 ? 0.0 : w * coverage_at_distance(tier, r, q);
      },
      spec);
}

double CoverageAnalyzer::conditional_coverage(Tier tier, const CoverageQuery& q) const {
  if (!(q.beta > 0.0)) throw DomainError("coverage: beta must be positive");
  const auto sd = serving(q.d);
  const double a = sd->association(tier);
  if (!(a > 1e-300)) throw ZeroAssociation(std::string("conditional_coverage: ") + to_string(tier) + " tier never serves");
  return joint_coverage(tier, q, *sd) / a;
}

CoverageResult CoverageAnalyzer::coverage(const CoverageQuery& q) const {
  if (!(q.beta > 0.0)) throw DomainError("coverage: beta must be positive");
  if (!(q.d >= 0.0) || q.d > cfg_.radius) throw DomainError("coverage: receiver offset outside [0, D]");
  CoverageResult out;
  if (cfg_.lambda_tx <= 0.0) return out;
  const auto sd = serving(q.d);
  out.assoc = sd->associations();
  out.regime = sd->regime();
  const double jl = joint_coverage(Tier::los, q, *sd);
  const double jn = joint_coverage(Tier::nlos, q, *sd);
  out.p_cover_los = out.assoc.los > 1e-300 ? jl / out.assoc.los : 0.0;
  out.p_cover_nlos = out.assoc.nlos > 1e-300 ? jn / out.assoc.nlos : 0.0;
  out.p_cover = std::clamp(out.assoc.los * out.p_cover_los + out.assoc.nlos * out.p_cover_nlos, 0.0, 1.0);
  return out;
}

std::vector<CoverageResult> CoverageAnalyzer::coverage_grid(std::span<const CoverageQuery> queries) const {
  std::vector<CoverageResult> out(queries.size());
  // warm the association cache serially so workers only read it
  for (const auto& q : queries)
    if (cfg_.lambda_tx > 0.0) serving(q.d);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < queries.size(); ++i) {
    try {
      out[i] = coverage(queries[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double CoverageAnalyzer::ergodic_rate(double d, CoverageMode mode) const {
  if (cfg_.lambda_tx <= 0.0) return 0.0;
  // tau = W \int_0^inf P_C(2^u - 1) du, with u in bit/s/Hz
  auto pc = [&](double u) {
    if (u <= 0.0) return coverage({1e-12, d, mode}).p_cover;
    return coverage({std::expm1(u * std::log(2.0)), d, mode}).p_cover;
  };
  double top = 4.0;
  while (pc(top) >= opt_.rate_floor) {
    top *= 2.0;
    if (top > 1024.0) throw NonConvergence("ergodic_rate: coverage does not decay with the threshold");
  }
  quad::IntegrationSpec spec;
  spec.lower = 0.0;
  spec.upper = top;
  spec.rel_tol = opt_.rate_rel_tol;
  spec.abs_tol = 1e-7;
  spec.max_subdivisions = 200;
  // the coverage curve changes scale roughly geometrically in u
  for (double b = 1.0; b < top; b *= 2.0) spec.breakpoints.push_back(b);
  return cfg_.bandwidth * quad::integrate_1d(pc, spec);
}

std::vector<double> CoverageAnalyzer::ergodic_rate_grid(std::span<const double> offsets, CoverageMode mode) const {
  std::vector<double> out(offsets.size());
  for (double d : offsets)
    if (cfg_.lambda_tx > 0.0) serving(d);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    try {
      out[i] = ergodic_rate(offsets[i], mode);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

CoverageResult coverage(const CoverageQuery& q, const NetworkConfig& cfg) { return CoverageAnalyzer(cfg).coverage(q); }

double conditional_coverage(Tier tier, const CoverageQuery& q, const NetworkConfig& cfg) {
  return CoverageAnalyzer(cfg).conditional_coverage(tier, q);
}

double ergodic_rate(double d, const NetworkConfig& cfg, CoverageMode mode) {
  return CoverageAnalyzer(cfg).ergodic_rate(d, mode);
}

BlockageSweep blockage_sweep(std::span<const double> mus, const CoverageQuery& q, const NetworkConfig& cfg,
                             AnalysisOptions opt) {
  if (mus.empty()) throw DomainError("blockage_sweep: empty grid");
  BlockageSweep out;
  out.curve.resize(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i) {
    NetworkConfig c = cfg;
    c.mu = mus[i];
    out.curve[i] = {mus[i], CoverageAnalyzer(c, opt).coverage(q).p_cover};
  }
  out.best = *std::max_element(out.curve.begin(), out.curve.end(),
                               [](const SweepPoint& a, const SweepPoint& b) { return a.value < b.value; });
  return out;
}

}  // namespace fmmw
