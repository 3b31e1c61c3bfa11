#pragma once

// Nearest-point distance laws of the LOS/NLOS transmitter tiers, the
// probability that the max-average-power rule picks each tier, and the
// density of the serving distance given the tier.

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "fmmw/channel.hpp"
#include "fmmw/geometry.hpp"

namespace fmmw {

/// Case 1 when (D-d)^(alpha_N/alpha_L) > D+d, i.e. the farthest LOS point can
/// never lose to an NLOS point beyond D-d. Case 2 otherwise.
enum class RegimeCase { case1, case2 };

inline const char* to_string(RegimeCase c) { return c == RegimeCase::case1 ? "case1" : "case2"; }

RegimeCase classify_regime(const DiskGeometry& geom, const PathlossModel& pathloss);

/// CDF of the distance to the closest point of a tier, given the tier is non-empty.
double closest_cdf(Tier tier, double r, double lambda, const DiskMeasures& measures);
/// Density of closest_cdf.
double closest_pdf(Tier tier, double r, double lambda, const DiskMeasures& measures);

struct AssociationProbabilities {
  double los = 0.0;
  double nlos = 0.0;
  RegimeCase regime = RegimeCase::case1;

  double of(Tier t) const { return t == Tier::los ? los : nlos; }
};

/// Association probabilities and serving-distance densities for one
/// (intensity, geometry, blockage, pathloss) configuration. Immutable after
/// construction; safe to share between threads.
class ServingDistribution {
public:
  ServingDistribution(double lambda, DiskMeasures measures, PathlossModel pathloss, double rel_tol = 1e-10);

  RegimeCase regime() const { return regime_; }
  double association(Tier t) const { return t == Tier::los ? assoc_los_ : assoc_nlos_; }
  AssociationProbabilities associations() const { return {assoc_los_, assoc_nlos_, regime_}; }

  /// Serving-distance density given the tier; zero outside (0, D+d).
  /// Throws ZeroAssociation when the tier is never selected.
  double pdf(Tier t, double r) const;
  /// P(tier selected and serving distance in dr) / dr.
  double joint_density(Tier t, double r) const;
  /// Points in (0, D+d) where the serving density changes formula.
  std::vector<double> breakpoints(Tier t) const;

  double lambda() const { return lambda_; }
  const DiskMeasures& measures() const { return measures_; }
  const PathlossModel& pathloss() const { return pathloss_; }
  double support_end() const { return measures_.geometry().outer(); }

private:
  double lambda_;
  DiskMeasures measures_;
  PathlossModel pathloss_;
  RegimeCase regime_;
  double assoc_los_ = 0.0;
  double assoc_nlos_ = 0.0;
};

AssociationProbabilities association_probabilities(double lambda, const DiskMeasures& measures,
                                                   const PathlossModel& pathloss);

double serving_pdf(Tier tier, double r, double lambda, const DiskMeasures& measures, const PathlossModel& pathloss);

/// Memoizes ServingDistribution per configuration. Lookups take a shared lock,
/// so concurrent readers see identical objects.
class AssociationCache {
public:
  std::shared_ptr<const ServingDistribution> get(double lambda, const DiskMeasures& measures,
                                                 const PathlossModel& pathloss);
  std::size_t size() const;

private:
  using Key = std::tuple<double, double, double, std::string, double, double>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const ServingDistribution>> entries_;
};

namespace detail {

/// P(serving distance > r and the tier is selected), assembled interval by
/// interval from the regime-specific closed forms. Used to cross-check the
/// densities; not on any production path.
double joint_serving_ccdf(Tier tier, double r, const ServingDistribution& dist, double rel_tol = 1e-10);

}  // namespace detail

}  // namespace fmmw
