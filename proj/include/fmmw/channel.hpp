#pragma once

// Sectored antenna patterns, LOS/NLOS pathloss and normalized Gamma fading.

#include "fmmw/errors.hpp"
#include "fmmw/geometry.hpp"
#include "fmmw/rng.hpp"

namespace fmmw {

/// Two-level sectored pattern: main_gain inside |angle| < beamwidth/2, side_gain elsewhere.
struct AntennaPattern {
  double beamwidth = 0.0;  ///< radians
  double main_gain = 0.0;  ///< linear
  double side_gain = 0.0;  ///< linear

  AntennaPattern() = default;
  AntennaPattern(double beamwidth_rad, double main, double side);

  double gain(double angle_off_boresight) const;
  /// Fraction of directions covered by the main lobe.
  double main_fraction() const { return beamwidth / kTwoPi; }
  double strongest_gain() const { return main_gain > side_gain ? main_gain : side_gain; }
  double weakest_gain() const { return main_gain > side_gain ? side_gain : main_gain; }
};

/// Uniform planar square array approximation: M = 3/theta^2 and the matching
/// side-lobe level. For beamwidths beyond about 99.2 degrees the formula gives
/// a side lobe stronger than the main lobe; the pattern is returned as is.
AntennaPattern pattern_from_beamwidth(double beamwidth_rad);

struct PathlossModel {
  double alpha_los = 2.0;
  double alpha_nlos = 4.0;

  PathlossModel() = default;
  PathlossModel(double los, double nlos);

  double exponent(Tier t) const { return t == Tier::los ? alpha_los : alpha_nlos; }
  /// alpha_los / alpha_nlos: an NLOS point at distance r competes with LOS points at r^(1/ratio).
  double ratio() const { return alpha_los / alpha_nlos; }
};

/// Nakagami orders; fading power is Gamma(v, 1/v).
struct FadingModel {
  int v_los = 3;
  int v_nlos = 2;

  FadingModel() = default;
  FadingModel(int los, int nlos);

  int order(Tier t) const { return t == Tier::los ? v_los : v_nlos; }
};

/// Products of transmit and receive gains: a1 = M_T M_R, a2 = M_T m_R, a3 = m_T M_R, a4 = m_T m_R.
struct GainLevels {
  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;
  double a4 = 1.0;

  static GainLevels from_patterns(const AntennaPattern& tx, const AntennaPattern& rx);
  double operator[](int k) const;
};

/// One Gamma(v, 1/v) draw, as the mean of v unit exponentials.
double sample_fading(Tier tier, const FadingModel& fading, Rng& rng);

/// gain * fading * distance^-alpha_tier
double received_power(double gain, double fading, double distance, Tier tier, const PathlossModel& pathloss);

}  // namespace fmmw
