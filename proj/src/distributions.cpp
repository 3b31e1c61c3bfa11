#include "fmmw/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "fmmw/quadrature.hpp"

namespace fmmw {

RegimeCase classify_regime(const DiskGeometry& geom, const PathlossModel& pathloss) {
  return std::pow(geom.inner(), 1.0 / pathloss.ratio()) > geom.outer() ? RegimeCase::case1 : RegimeCase::case2;
}

double closest_cdf(Tier tier, double r, double lambda, const DiskMeasures& measures) {
  const double total = measures.total(tier);
  if (!(lambda * total > 0.0)) throw DomainError("closest_cdf: the tier is empty");
  if (r <= 0.0) return 0.0;
  if (r >= measures.geometry().outer()) return 1.0;
  return -std::expm1(-lambda * measures.measure(tier, r)) / -std::expm1(-lambda * total);
}

double closest_pdf(Tier tier, double r, double lambda, const DiskMeasures& measures) {
  const double total = measures.total(tier);
  if (!(lambda * total > 0.0)) throw DomainError("closest_pdf: the tier is empty");
  if (r <= 0.0 || r >= measures.geometry().outer()) return 0.0;
  return lambda * measures.derivative(tier, r) * std::exp(-lambda * measures.measure(tier, r)) /
         -std::expm1(-lambda * total);
}

ServingDistribution::ServingDistribution(double lambda, DiskMeasures measures, PathlossModel pathloss, double rel_tol)
    : lambda_(lambda), measures_(std::move(measures)), pathloss_(pathloss),
      regime_(classify_regime(measures_.geometry(), pathloss_)) {
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw DomainError("ServingDistribution: intensity must be >= 0");
  if (lambda_ == 0.0) return;
  for (Tier t : {Tier::los, Tier::nlos}) {
    if (measures_.total(t) <= 0.0) continue;
    quad::IntegrationSpec spec;
    spec.lower = 0.0;
    spec.upper = support_end();
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-300;
    spec.max_subdivisions = 2000;
    spec.breakpoints = breakpoints(t);
    const double a = quad::integrate_1d([&](double r) { return joint_density(t, r); }, spec);
    (t == Tier::los ? assoc_los_ : assoc_nlos_) = a;
  }
}

double ServingDistribution::joint_density(Tier t, double r) const {
  const double end = support_end();
  if (r <= 0.0 || r >= end) return 0.0;
  const double deriv = measures_.derivative(t, r);
  if (deriv == 0.0) return 0.0;
  // A competing point of the other tier at distance x wins iff x < r^(alpha_other/alpha_t).
  const double power = t == Tier::los ? pathloss_.ratio() : 1.0 / pathloss_.ratio();
  const double rival = std::pow(r, power);
  const double exponent = measures_.measure(t, r) + measures_.measure(other(t), rival);
  return lambda_ * deriv * std::exp(-lambda_ * exponent);
}

double ServingDistribution::pdf(Tier t, double r) const {
  const double a = association(t);
  if (!(a > 1e-300)) throw ZeroAssociation(std::string("serving_pdf: ") + to_string(t) + " tier is never selected");
  return joint_density(t, r) / a;
}

std::vector<double> ServingDistribution::breakpoints(Tier t) const {
  const auto& g = measures_.geometry();
  const double rho = pathloss_.ratio();
  std::vector<double> pts = {g.inner()};
  if (t == Tier::los) {
    pts.push_back(std::pow(g.inner(), 1.0 / rho));
  } else {
    pts.push_back(std::pow(g.inner(), rho));
    pts.push_back(std::pow(g.outer(), rho));
  }
  std::vector<double> out;
  for (double p : pts)
    if (p > 0.0 && p < g.outer()) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AssociationProbabilities association_probabilities(double lambda, const DiskMeasures& measures,
                                                   const PathlossModel& pathloss) {
  return ServingDistribution(lambda, measures, pathloss).associations();
}

double serving_pdf(Tier tier, double r, double lambda, const DiskMeasures& measures, const PathlossModel& pathloss) {
  return ServingDistribution(lambda, measures, pathloss).pdf(tier, r);
}

std::shared_ptr<const ServingDistribution> AssociationCache::get(double lambda, const DiskMeasures& measures,
                                                                 const PathlossModel& pathloss) {
  const auto& g = measures.geometry();
  const auto& b = measures.blockage();
  const std::string bkey = b.exponent() ? "mu=" + std::to_string(*b.exponent()) : b.label();
  Key key{lambda, g.radius, g.offset, bkey, pathloss.alpha_los, pathloss.alpha_nlos};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto made = std::make_shared<const ServingDistribution>(lambda, measures, pathloss);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, std::move(made));
  return it->second;
}

std::size_t AssociationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

namespace detail {

namespace {

struct Piece {
  double lo;
  double hi;
  std::function<double(double)> density;
};

}  // namespace

double joint_serving_ccdf(Tier tier, double r, const ServingDistribution& dist, double rel_tol) {
  const auto& m = dist.measures();
  const auto& g = m.geometry();
  const auto& blk = m.blockage();
  const double lam = dist.lambda();
  const double rho = dist.pathloss().ratio();
  const double a = g.inner();
  const double b = g.outer();
  const bool case1 = dist.regime() == RegimeCase::case1;

  // Ball and boundary-arc forms written out as in the interval-wise derivation.
  auto ball_los = [&](double x) { return kTwoPi * blk.los_moment(x); };
  auto ball_nlos = [&](double x) { return kTwoPi * blk.nlos_moment(x); };
  auto arc_los_deriv = [&](double y) { return g.centered() ? 0.0 : 2.0 * varphi(y, g) * y * blk.los_probability(y); };
  auto arc_nlos_deriv = [&](double y) {
    return g.centered() ? 0.0 : 2.0 * varphi(y, g) * y * blk.nlos_probability(y);
  };
  const double h_total = m.total(Tier::los);
  auto ball_density = [&](double y, double los_part) {
    return lam * kTwoPi * y * blk.nlos_probability(y) * std::exp(-lam * (los_part + ball_nlos(y)));
  };

  std::vector<Piece> pieces;
  if (tier == Tier::los) {
    const double c = std::pow(a, 1.0 / rho);
    pieces.push_back({0.0, a, [&](double y) {
                        return lam * kTwoPi * y * blk.los_probability(y) *
                               std::exp(-lam * (ball_nlos(std::pow(y, rho)) + ball_los(y)));
                      }});
    const double mid_end = case1 ? b : c;
    pieces.push_back({a, mid_end, [&](double y) {
                        return lam * arc_los_deriv(y) *
                               std::exp(-lam * (ball_nlos(std::pow(y, rho)) + los_measure(y, g, blk)));
                      }});
    if (!case1)
      pieces.push_back({c, b, [&](double y) {
                          return lam * arc_los_deriv(y) *
                                 std::exp(-lam * (nlos_measure(std::pow(y, rho), g, blk) + los_measure(y, g, blk)));
                        }});
  } else {
    const double a_r = std::pow(a, rho);
    const double b_r = std::pow(b, rho);
    pieces.push_back({0.0, a_r, [&](double y) { return ball_density(y, ball_los(std::pow(y, 1.0 / rho))); }});
    if (case1) {
      pieces.push_back(
          {a_r, b_r, [&](double y) { return ball_density(y, los_measure(std::pow(y, 1.0 / rho), g, blk)); }});
      pieces.push_back({b_r, a, [&](double y) { return ball_density(y, h_total); }});
      pieces.push_back({a, b, [&](double y) {
                          return lam * arc_nlos_deriv(y) * std::exp(-lam * (h_total + nlos_measure(y, g, blk)));
                        }});
    } else {
      pieces.push_back(
          {a_r, a, [&](double y) { return ball_density(y, los_measure(std::pow(y, 1.0 / rho), g, blk)); }});
      pieces.push_back({a, b_r, [&](double y) {
                          return lam * arc_nlos_deriv(y) *
                                 std::exp(-lam * (los_measure(std::pow(y, 1.0 / rho), g, blk) +
                                                  nlos_measure(y, g, blk)));
                        }});
      pieces.push_back({b_r, b, [&](double y) {
                          return lam * arc_nlos_deriv(y) * std::exp(-lam * (h_total + nlos_measure(y, g, blk)));
                        }});
    }
  }

  double sum = 0.0;
  for (const auto& p : pieces) {
    const double lo = std::max(p.lo, r);
    if (!(p.hi > lo)) continue;
    quad::IntegrationSpec spec;
    spec.lower = lo;
    spec.upper = p.hi;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-300;
    spec.max_subdivisions = 2000;
    sum += quad::integrate_1d(p.density, spec);
  }
  return sum;
}

}  // namespace detail

}  // namespace fmmw
