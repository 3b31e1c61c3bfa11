#pragma once

// Coverage probability, its bounds and the ergodic rate of the reference
// receiver, evaluated by quadrature.

#include <memory>
#include <span>
#include <vector>

#include "fmmw/distributions.hpp"
#include "fmmw/interference.hpp"
#include "fmmw/network.hpp"

namespace fmmw {

enum class CoverageMode { exact, lower_bound, upper_bound };

const char* to_string(CoverageMode m);

struct CoverageQuery {
  double beta = 10.0;  ///< linear SINR threshold
  double d = 0.0;      ///< receiver offset from the region centre, metres
  CoverageMode mode = CoverageMode::exact;
};

struct CoverageResult {
  double p_cover = 0.0;
  double p_cover_los = 0.0;   ///< given LOS service; 0 when LOS service is impossible
  double p_cover_nlos = 0.0;  ///< given NLOS service
  AssociationProbabilities assoc;
  RegimeCase regime = RegimeCase::case1;
};

struct AnalysisOptions {
  double rel_tol = 1e-5;         ///< serving-distance integral
  double rate_rel_tol = 1e-4;    ///< threshold integral of the rate
  double rate_floor = 1e-6;      ///< coverage below which the rate integrand is truncated
  InterferenceOptions interference;
};

/// Shares one set of interference tables and association results across all
/// queries of a configuration. Thread-safe for concurrent queries.
class CoverageAnalyzer {
public:
  explicit CoverageAnalyzer(const NetworkConfig& cfg, AnalysisOptions opt = {});

  const NetworkConfig& config() const { return cfg_; }
  const InterferenceModel& interference() const { return *model_; }

  /// Coverage given service by `tier`.
  double conditional_coverage(Tier tier, const CoverageQuery& q) const;
  /// Coverage given service by `tier` at serving distance r.
  double coverage_at_distance(Tier tier, double r, const CoverageQuery& q) const;
  CoverageResult coverage(const CoverageQuery& q) const;
  /// Evaluates every query; parallel across queries.
  std::vector<CoverageResult> coverage_grid(std::span<const CoverageQuery> queries) const;

  /// Ergodic rate in bit/s.
  double ergodic_rate(double d, CoverageMode mode = CoverageMode::exact) const;
  std::vector<double> ergodic_rate_grid(std::span<const double> offsets, CoverageMode mode = CoverageMode::exact) const;

  std::shared_ptr<const ServingDistribution> serving(double d) const;

private:
  double joint_coverage(Tier tier, const CoverageQuery& q, const ServingDistribution& sd) const;

  NetworkConfig cfg_;
  AnalysisOptions opt_;
  std::shared_ptr<const InterferenceModel> model_;
  mutable AssociationCache cache_;
};

CoverageResult coverage(const CoverageQuery& q, const NetworkConfig& cfg);
double conditional_coverage(Tier tier, const CoverageQuery& q, const NetworkConfig& cfg);
double ergodic_rate(double d, const NetworkConfig& cfg, CoverageMode mode = CoverageMode::exact);

struct SweepPoint {
  double x = 0.0;
  double value = 0.0;
};

struct BlockageSweep {
  std::vector<SweepPoint> curve;
  SweepPoint best;
};

/// Coverage over a grid of blockage exponents.
BlockageSweep blockage_sweep(std::span<const double> mus, const CoverageQuery& q, const NetworkConfig& cfg,
                             AnalysisOptions opt = {});

}  // namespace fmmw
