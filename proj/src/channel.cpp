#include "fmmw/channel.hpp"

#include <cmath>

namespace fmmw {

AntennaPattern::AntennaPattern(double beamwidth_rad, double main, double side)
    : beamwidth(beamwidth_rad), main_gain(main), side_gain(side) {
  if (!(beamwidth > 0.0) || beamwidth > kTwoPi) throw DomainError("AntennaPattern: beamwidth must be in (0, 2pi]");
  if (!(main_gain > 0.0) || !(side_gain > 0.0)) throw DomainError("AntennaPattern: gains must be positive");
}

double AntennaPattern::gain(double angle_off_boresight) const {
  double a = std::remainder(angle_off_boresight, kTwoPi);
  return std::abs(a) < 0.5 * beamwidth ? main_gain : side_gain;
}

AntennaPattern pattern_from_beamwidth(double theta) {
  if (!(theta > 0.0) || !(theta < kTwoPi)) throw DomainError("pattern_from_beamwidth: beamwidth must be in (0, 2pi)");
  const double root3 = std::sqrt(3.0);
  const double s = std::sin(0.5 * theta);
  const double main = 3.0 / (theta * theta);
  const double side = (root3 * theta - 3.0 * root3 / kTwoPi * s) / (root3 * theta - root3 / kTwoPi * theta * theta * s);
  return AntennaPattern(theta, main, side);
}

PathlossModel::PathlossModel(double los, double nlos) : alpha_los(los), alpha_nlos(nlos) {
  if (!(alpha_los > 0.0) || !(alpha_los < alpha_nlos) || !std::isfinite(alpha_nlos))
    throw DomainError("PathlossModel: need 0 < alpha_los < alpha_nlos");
}

FadingModel::FadingModel(int los, int nlos) : v_los(los), v_nlos(nlos) {
  if (v_los < 1 || v_nlos < 1) throw DomainError("FadingModel: Nakagami orders must be integers >= 1");
}

GainLevels GainLevels::from_patterns(const AntennaPattern& tx, const AntennaPattern& rx) {
  return {tx.main_gain * rx.main_gain, tx.main_gain * rx.side_gain, tx.side_gain * rx.main_gain,
          tx.side_gain * rx.side_gain};
}

double GainLevels::operator[](int k) const {
  switch (k) {
    case 1: return a1;
    case 2: return a2;
    case 3: return a3;
    case 4: return a4;
    default: throw DomainError("GainLevels: index must be 1..4");
  }
}

double sample_fading(Tier tier, const FadingModel& fading, Rng& rng) {
  const int v = fading.order(tier);
  double sum = 0.0;
  for (int i = 0; i < v; ++i) sum += rng.exponential();
  return sum / static_cast<double>(v);
}

double received_power(double gain, double fading, double distance, Tier tier, const PathlossModel& pathloss) {
  if (!(distance > 0.0)) throw DomainError("received_power: distance must be positive");
  return gain * fading * std::pow(distance, -pathloss.exponent(tier));
}

}  // namespace fmmw
