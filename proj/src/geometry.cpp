#include "fmmw/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fmmw/quadrature.hpp"

namespace fmmw {

DiskGeometry::DiskGeometry(double radius_m, double offset_m) : radius(radius_m), offset(offset_m) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("DiskGeometry: radius must be positive");
  if (!(offset >= 0.0) || offset > radius) throw DomainError("DiskGeometry: receiver must lie inside the region");
}

BlockageModel BlockageModel::exponential(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("BlockageModel: exponent must be finite and >= 0");
  BlockageModel m;
  m.mu_ = mu;
  m.label_ = "exp(-" + std::to_string(mu) + " r)";
  return m;
}

BlockageModel BlockageModel::custom(std::function<double(double)> p_los, std::string label) {
  if (!p_los) throw DomainError("BlockageModel: empty LOS probability function");
  BlockageModel m;
  m.custom_ = std::make_shared<const std::function<double(double)>>(std::move(p_los));
  m.label_ = std::move(label);
  return m;
}

BlockageModel BlockageModel::never_los() {
  return custom([](double) { return 0.0; }, "never-LOS");
}

double BlockageModel::los_probability(double r) const {
  if (mu_) return std::exp(-*mu_ * r);
  return std::clamp((*custom_)(r), 0.0, 1.0);
}

double BlockageModel::los_moment(double r) const {
  if (r <= 0.0) return 0.0;
  if (mu_) {
    const double mu = *mu_;
    const double z = mu * r;
    if (z < 0.1) {
      // 1 - e^{-z}(1+z) = sum_{k>=2} (-1)^k (k-1) z^k / k!
      double term = 0.5;  // k = 2 coefficient
      double sum = 0.0;
      double zk = 1.0;
      double fact = 2.0;
      for (int k = 2; k < 12; ++k) {
        term = ((k % 2 == 0) ? 1.0 : -1.0) * static_cast<double>(k - 1) / fact;
        sum += term * zk;
        zk *= z;
        fact *= static_cast<double>(k + 1);
      }
      return r * r * sum;
    }
    return (-std::expm1(-z) - z * std::exp(-z)) / (mu * mu);
  }
  quad::IntegrationSpec spec;
  spec.lower = 0.0;
  spec.upper = r;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-15 * r * r;
  return quad::integrate_1d([this](double x) { return x * los_probability(x); }, spec);
}

double varphi(double r, const DiskGeometry& geom) {
  if (geom.offset == 0.0) throw DegenerateCenter("varphi: undefined for a receiver at the region centre");
  const double tol = 1e-12 * geom.radius;
  if (r < geom.inner() - tol || r > geom.outer() + tol) throw DomainError("varphi: r outside [D-d, D+d]");
  if (r <= 0.0) return kPi;  // receiver on the boundary, r = D - d = 0
  const double c = (r * r + geom.offset * geom.offset - geom.radius * geom.radius) / (2.0 * geom.offset * r);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double boundary_radius(double theta, const DiskGeometry& geom) {
  const double s = std::sin(theta);
  const double d = geom.offset;
  return std::sqrt(std::max(0.0, geom.radius * geom.radius - d * d * s * s)) + d * std::cos(theta);
}

double intersection_area(double r, const DiskGeometry& geom) {
  if (r <= 0.0) return 0.0;
  if (r <= geom.inner()) return kPi * r * r;
  if (r >= geom.outer()) return geom.area();
  const double d = geom.offset;
  const double D = geom.radius;
  const double a1 = std::acos(std::clamp((d * d + r * r - D * D) / (2.0 * d * r), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + D * D - r * r) / (2.0 * d * D), -1.0, 1.0));
  const double k = (-d + r + D) * (d + r - D) * (d - r + D) * (d + r + D);
  return r * r * a1 + D * D * a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

namespace {

double snap(double r, const DiskGeometry& geom) {
  const double tol = 1e-12 * geom.radius;
  if (std::abs(r - geom.inner()) < tol) return geom.inner();
  if (std::abs(r - geom.outer()) < tol) return geom.outer();
  return r;
}

// \int_{theta0}^{pi} moment(R(theta)) dtheta, doubled for the mirror half.
double boundary_integral(Tier t, double theta0, const DiskGeometry& geom, const BlockageModel& blockage) {
  quad::IntegrationSpec spec;
  spec.lower = theta0;
  spec.upper = kPi;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-14 * geom.area();
  spec.max_subdivisions = 400;
  spec.breakpoints = {0.5 * kPi};  // R(theta) has a kink there when d = D
  return 2.0 * quad::integrate_1d([&](double th) { return blockage.moment(t, boundary_radius(th, geom)); }, spec);
}

double tier_measure(Tier t, double r, const DiskGeometry& geom, const BlockageModel& blockage) {
  if (r < 0.0) throw DomainError("measure: r must be non-negative");
  r = snap(r, geom);
  if (geom.centered()) return kTwoPi * blockage.moment(t, std::min(r, geom.radius));
  if (r < geom.inner()) return kTwoPi * blockage.moment(t, r);
  if (r >= geom.outer()) return boundary_integral(t, 0.0, geom, blockage);
  const double phi = varphi(r, geom);
  return 2.0 * phi * blockage.moment(t, r) + boundary_integral(t, phi, geom, blockage);
}

double tier_derivative(Tier t, double r, const DiskGeometry& geom, const BlockageModel& blockage) {
  if (r < 0.0 || r > geom.outer() + 1e-12 * geom.radius) throw DomainError("measure derivative: r outside support");
  r = snap(r, geom);
  if (r >= geom.outer()) return 0.0;
  if (geom.centered() || r < geom.inner()) return kTwoPi * r * blockage.probability(t, r);
  return 2.0 * varphi(r, geom) * r * blockage.probability(t, r);
}

}  // namespace

double los_measure(double r, const DiskGeometry& geom, const BlockageModel& blockage) {
  return tier_measure(Tier::los, r, geom, blockage);
}

double nlos_measure(double r, const DiskGeometry& geom, const BlockageModel& blockage) {
  return tier_measure(Tier::nlos, r, geom, blockage);
}

double los_measure_derivative(double r, const DiskGeometry& geom, const BlockageModel& blockage) {
  return tier_derivative(Tier::los, r, geom, blockage);
}

double nlos_measure_derivative(double r, const DiskGeometry& geom, const BlockageModel& blockage) {
  return tier_derivative(Tier::nlos, r, geom, blockage);
}

DiskMeasures::DiskMeasures(DiskGeometry geom, BlockageModel blockage)
    : geom_(geom), blockage_(std::move(blockage)) {
  total_los_ = tier_measure(Tier::los, geom_.outer(), geom_, blockage_);
  total_nlos_ = tier_measure(Tier::nlos, geom_.outer(), geom_, blockage_);
}

double DiskMeasures::measure(Tier t, double r) const {
  if (r >= geom_.outer()) return total(t);
  return tier_measure(t, r, geom_, blockage_);
}

double DiskMeasures::derivative(Tier t, double r) const {
  if (r >= geom_.outer()) return 0.0;
  return tier_derivative(t, r, geom_, blockage_);
}

}  // namespace fmmw
