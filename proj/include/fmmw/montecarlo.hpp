#pragma once

// Full-system simulation of the finite network: sample transmitters and
// receivers, run the association rule, orient every beam, and measure the
// SINR at the reference receiver.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fmmw/network.hpp"
#include "fmmw/rng.hpp"

namespace fmmw {

/// How each interferer's own served receiver is drawn.
enum class ReceiverModel {
  /// Receivers at lambda_rx associate by average power; each transmitter
  /// serves one of its associated receivers chosen uniformly.
  full_pipeline,
  /// Each interferer draws its own receiver process of intensity lambda_tx
  /// and serves the receiver it would associate with itself.
  independent_active,
};

/// What a transmitter with no associated receiver does.
enum class IdlePolicy { silent, always };

struct SimOptions {
  ReceiverModel receivers = ReceiverModel::full_pipeline;
  IdlePolicy idle = IdlePolicy::silent;
  std::size_t chunk = 2048;  ///< trials per deterministic work unit
  int threads = 0;           ///< 0: OpenMP default
};

struct Transmitter {
  double px = 0.0;  ///< position, reference receiver at the origin
  double py = 0.0;
  double dist = 0.0;
  Tier tier = Tier::los;  ///< state of the link to the reference receiver
  double fading = 1.0;
  bool active = true;
  double beam = 0.0;         ///< main-lobe direction, radians
  double served_dist = 0.0;  ///< distance to its own receiver (0 when idle)
};

struct Realization {
  double offset = 0.0;
  std::vector<Transmitter> tx;
  std::optional<std::size_t> serving;  ///< index of the serving transmitter
};

Realization sample_realization(const NetworkConfig& cfg, double d, Rng& rng, const SimOptions& opt = {});

struct SinrSample {
  bool has_transmitter = false;
  double sinr = 0.0;
  Tier tier = Tier::los;
  double serving_distance = 0.0;
  double interference_los = 0.0;
  double interference_nlos = 0.0;
};

/// SINR of the reference receiver; has_transmitter is false for an empty region.
SinrSample simulate_sinr(const Realization& real, const NetworkConfig& cfg);

/// One trial keyed by (seed, trial).
SinrSample simulate_trial(const NetworkConfig& cfg, double d, std::uint64_t seed, std::uint64_t trial,
                          const SimOptions& opt = {});

struct SimEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;
  std::int64_t trials = 0;
};

SimEstimate estimate_coverage(const NetworkConfig& cfg, double d, double beta, std::int64_t trials,
                              std::uint64_t seed, const SimOptions& opt = {});
/// Coverage at every threshold from the same realizations.
std::vector<SimEstimate> estimate_coverage_curve(const NetworkConfig& cfg, double d, std::span<const double> betas,
                                                 std::int64_t trials, std::uint64_t seed, const SimOptions& opt = {});
/// Single-threaded reference for estimate_coverage_curve.
std::vector<SimEstimate> estimate_coverage_curve_serial(const NetworkConfig& cfg, double d,
                                                        std::span<const double> betas, std::int64_t trials,
                                                        std::uint64_t seed, const SimOptions& opt = {});
/// Mean of W log2(1 + SINR), zero for an empty region.
SimEstimate estimate_rate(const NetworkConfig& cfg, double d, std::int64_t trials, std::uint64_t seed,
                          const SimOptions& opt = {});

/// Interference at the reference receiver given a serving link of the given
/// tier and length, with interferers of each tier kept outside their
/// exclusion radius. Interferer receivers follow opt.receivers.
struct InterferenceSample {
  double los = 0.0;
  double nlos = 0.0;
};
InterferenceSample sample_conditional_interference(const NetworkConfig& cfg, double d, Tier serving, double r,
                                                   Rng& rng, const SimOptions& opt = {});

}  // namespace fmmw
