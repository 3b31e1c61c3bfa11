#pragma once

// Antenna-gain mixture of an interfering link, the law of the distance from an
// interferer to its own receiver, and the conditional Laplace transforms of the
// LOS and NLOS interference at the reference receiver.

#include <array>
#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "fmmw/distributions.hpp"
#include "fmmw/network.hpp"
#include "fmmw/quadrature.hpp"

namespace fmmw {

/// Length of the part of the arc [-arc, arc] that falls inside the circular
/// window of half-width `half` centred at `center` (angles in radians).
double window_overlap(double center, double half, double arc);

/// Interferer at polar (x, theta) about the reference receiver.
struct InterfererGeometry {
  double x = 0.0;          ///< distance to the reference receiver
  double theta = 0.0;      ///< angle from the direction of the region centre
  double d_hat = 0.0;      ///< distance to the region centre
  double serving_r = 0.0;  ///< serving distance of the reference receiver

  static InterfererGeometry locate(double x, double theta, const DiskGeometry& geom, double serving_r);
};

/// c: probability the interferer's main lobe covers the reference receiver.
/// dcoef: probability the reference receiver's main lobe covers the interferer.
struct BeamProbabilities {
  double c = 0.0;
  double dcoef = 0.0;
};

/// Beam probabilities when the interferer serves a receiver at distance y_r.
BeamProbabilities beam_angles(const InterfererGeometry& ig, double y_r, const DiskGeometry& geom,
                              const AntennaPattern& tx, const AntennaPattern& rx);

/// Probability that the reference receiver's beam, aimed at a serving
/// transmitter at distance r, covers direction theta.
double receive_main_probability(double theta, double r, const DiskGeometry& geom, double beamwidth_rx);

/// Probability that a transmitter at centre offset d_hat, serving a receiver at
/// distance y, covers a point seen at angle phi_hat from its centre direction.
double transmit_main_probability(double phi_hat, double d_hat, double y, double radius, double beamwidth_tx);

struct GainMixture {
  std::array<double, 4> probs{};
  GainLevels levels;

  static GainMixture combine(double c, double dcoef, const GainLevels& levels);
  /// sum_k b_k (1 + s a_k x^-alpha / v)^-v
  double nakagami_mgf(double s, double x, double alpha, int v) const;
};

GainMixture gain_mixture(const InterfererGeometry& ig, double y_r, const DiskGeometry& geom, const AntennaPattern& tx,
                         const AntennaPattern& rx);

/// Density of the distance from a transmitter at centre offset d_hat to the
/// receiver it serves, given that it serves one. Evaluated from scratch.
double served_distance_pdf(double d_hat, double y, const NetworkConfig& cfg);

enum class BoundKind { lower, upper };

/// Exclusion radius of interferer tier `interferer` when the serving link of
/// tier `serving` has length r.
double exclusion_radius(Tier serving, Tier interferer, double r, const PathlossModel& pathloss);

struct InterferenceOptions {
  std::size_t offset_points = 64;      ///< d_hat grid of the tables
  std::size_t distance_points = 256;   ///< y grid of the served-distance table
  std::size_t direction_points = 129;  ///< phi_hat grid of the main-beam table
  std::size_t panels = 160;            ///< Gauss-Legendre panels per served-distance row
  double rel_tol = 1e-4;               ///< Laplace exponent tolerance
  std::size_t profile_points = 128;    ///< interferer-distance grid of each per-offset angular table
};

/// Precomputed tables for one configuration; everything the Laplace transforms
/// need that does not depend on the receiver offset, the threshold or the noise.
/// Immutable after construction and safe to share across threads.
class InterferenceModel {
public:
  explicit InterferenceModel(const NetworkConfig& cfg, InterferenceOptions opt = {});

  const NetworkConfig& config() const { return cfg_; }
  const InterferenceOptions& options() const { return opt_; }

  /// Served-distance density interpolated from the table.
  double served_distance_pdf(double d_hat, double y) const;
  /// E[c] over the served distance, for a transmitter at offset d_hat seeing
  /// the reference receiver at angle phi_hat from its centre direction.
  double mean_main_beam(double d_hat, double phi_hat) const;

  /// Conditional Laplace transform of the `interferer`-tier interference given
  /// a `serving`-tier link of length r, for a receiver at offset d.
  double laplace_transform(Tier serving, Tier interferer, double s, double r, double d) const;
  /// Same, with every interferer transmitting through its strongest (lower)
  /// or weakest (upper) lobe.
  double laplace_transform_bound(BoundKind kind, Tier serving, Tier interferer, double s, double r, double d) const;
  /// Reference path: explicit integral over the served distance at each point.
  double laplace_transform_direct(Tier serving, Tier interferer, double s, double r, double d) const;

  /// -log of laplace_transform; exposed for log-convexity checks.
  double laplace_exponent(Tier serving, Tier interferer, double s, double r, double d) const;

private:
  enum class Path { tabulated, lower, upper, direct };

  // Cumulative angular moments int_0^t c dtheta and int_0^t theta c dtheta of
  // the mean main-beam probability, for one receiver offset.
  struct Profile {
    DiskGeometry geom{1.0, 0.0};
    std::vector<quad::Tabulation> m0;  // per x segment, (x, t / psi(x))
    std::vector<quad::Tabulation> m1;
    std::vector<double> seg_hi;        // upper x of each segment
  };
  // Half-range angular integrals at interferer distance x.
  struct AngularWeights {
    double a0 = 0.0;  // int dtheta
    double a1 = 0.0;  // int c
    double h = 0.0;   // int dcoef
    double k = 0.0;   // int c dcoef
  };

  std::shared_ptr<const Profile> profile(double d) const;
  AngularWeights weights(const Profile& p, double x, double fixed_c, bool tabulated_c, double rx_arc) const;
  double exponent(Path path, Tier serving, Tier interferer, double s, double r, double d) const;
  double direct_exponent(Tier serving, Tier interferer, double s, double r, double d) const;
  double direct_mixture(double d_hat, double phi_hat, double dcoef, const std::array<double, 4>& kern) const;

  NetworkConfig cfg_;
  InterferenceOptions opt_;
  AntennaPattern tx_;
  AntennaPattern rx_;
  GainLevels levels_;
  BlockageModel blockage_;
  quad::Tabulation served_;     // (d_hat, u = y / (D + d_hat)) -> (D + d_hat) f(y)
  quad::Tabulation main_beam_;  // (d_hat, phi_hat) -> E[c]

  struct ProfileCache {
    std::shared_mutex mutex;
    std::map<double, std::shared_ptr<const Profile>> entries;
  };
  std::unique_ptr<ProfileCache> profiles_ = std::make_unique<ProfileCache>();
};

}  // namespace fmmw
