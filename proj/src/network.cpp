#include "fmmw/network.hpp"

#include <string>

namespace fmmw {

void NetworkConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
  };
  require(radius > 0.0 && std::isfinite(radius), "radius must be positive");
  require(lambda_tx >= 0.0 && std::isfinite(lambda_tx), "lambda_tx must be >= 0");
  require(lambda_rx >= 0.0 && std::isfinite(lambda_rx), "lambda_rx must be >= 0");
  require(noise >= 0.0 && std::isfinite(noise), "noise must be >= 0");
  require(mu >= 0.0 && std::isfinite(mu), "mu must be >= 0");
  require(pathloss.alpha_los > 0.0 && pathloss.alpha_los < pathloss.alpha_nlos && std::isfinite(pathloss.alpha_nlos),
          "need 0 < alpha_los < alpha_nlos");
  require(fading.v_los >= 1 && fading.v_nlos >= 1, "Nakagami orders must be >= 1");
  if (!tx_pattern_override) require(beam_tx > 0.0 && beam_tx < kTwoPi, "beam_tx must be in (0, 360) degrees");
  if (!rx_pattern_override) require(beam_rx > 0.0 && beam_rx < kTwoPi, "beam_rx must be in (0, 360) degrees");
  require(bandwidth > 0.0 && std::isfinite(bandwidth), "bandwidth must be positive");
}

}  // namespace fmmw
