#pragma once

// Physical parameters of one network scenario. Everything is stored in
// internal units: linear power, radians, metres.

#include <cmath>
#include <optional>

#include "fmmw/channel.hpp"
#include "fmmw/geometry.hpp"

namespace fmmw {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct NetworkConfig {
  double radius = 50.0;                  ///< D
  double lambda_tx = 0.004;              ///< transmitters per m^2
  double lambda_rx = 0.04;               ///< receivers per m^2 (simulation only)
  double noise = 1e-3;                   ///< sigma^2 relative to transmit power
  double mu = 1.0 / 15.0;                ///< blockage exponent, p_L(r) = exp(-mu r)
  PathlossModel pathloss{2.0, 4.0};
  FadingModel fading{3, 2};
  double beam_tx = deg_to_rad(36.0);
  double beam_rx = deg_to_rad(36.0);
  double bandwidth = 200e6;              ///< Hz
  /// Explicit patterns replace the beamwidth-derived ones when set.
  std::optional<AntennaPattern> tx_pattern_override;
  std::optional<AntennaPattern> rx_pattern_override;

  /// Throws ConfigError naming the first bad field.
  void validate() const;

  BlockageModel blockage() const { return BlockageModel::exponential(mu); }
  AntennaPattern tx_pattern() const { return tx_pattern_override ? *tx_pattern_override : pattern_from_beamwidth(beam_tx); }
  AntennaPattern rx_pattern() const { return rx_pattern_override ? *rx_pattern_override : pattern_from_beamwidth(beam_rx); }
  GainLevels gains() const { return GainLevels::from_patterns(tx_pattern(), rx_pattern()); }
  DiskGeometry geometry(double offset) const { return DiskGeometry(radius, offset); }
};

}  // namespace fmmw
