#pragma once

// Experiment description read from flat `key = value` files. Values are kept
// in presentation units (dB, degrees) so that a file round-trips exactly;
// network() converts them to internal units.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fmmw/montecarlo.hpp"
#include "fmmw/network.hpp"

namespace fmmw {

enum class SweepAxis { beta_db, delta, theta_deg, mu, alpha_los };
enum class ResultMode { analytic, mc, lower, upper };
enum class Metric { coverage, rate };

const char* to_string(SweepAxis a);
const char* to_string(ResultMode m);
const char* to_string(Metric m);

struct ExperimentConfig {
  // network, presentation units
  double radius = 50.0;
  double lambda_tx = 0.004;
  double lambda_rx = 0.04;
  double noise_db = -30.0;
  double mu = 1.0 / 15.0;
  double alpha_los = 2.0;
  double alpha_nlos = 4.0;
  int v_los = 3;
  int v_nlos = 2;
  double theta_tx_deg = 36.0;
  double theta_rx_deg = 36.0;
  double bandwidth = 200e6;

  // experiment
  Metric metric = Metric::coverage;
  SweepAxis axis = SweepAxis::beta_db;
  double grid_from = -10.0;
  double grid_to = 30.0;
  double grid_step = 2.0;
  std::vector<ResultMode> modes = {ResultMode::analytic};
  double beta_db = 10.0;  ///< threshold when beta is not the swept axis
  double delta = 0.0;     ///< receiver offset d / D when delta is not swept
  std::int64_t trials = 100'000;
  std::uint64_t seed = 1;
  ReceiverModel receivers = ReceiverModel::full_pipeline;
  IdlePolicy idle = IdlePolicy::silent;
  std::string output;  ///< CSV path; empty writes to standard output
  double rel_tol = 1e-5;
  double lt_tol = 1e-4;

  /// Throws ConfigError naming the first bad field.
  void validate() const;
  NetworkConfig network() const;
  std::vector<double> grid() const;
  bool wants(ResultMode m) const;
};

/// Every recognised key, in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one key from its text form; throws ConfigError for unknown keys or bad values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const ExperimentConfig& cfg, const std::string& key);

/// Parses `key = value` lines; `#` starts a comment. Later lines win.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<input>");
ExperimentConfig load_config(const std::string& path);
/// Applies FMMW_<KEY> environment variables (key upper-cased).
void apply_environment(ExperimentConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace fmmw
