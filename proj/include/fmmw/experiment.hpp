#pragma once

// Runs a configured sweep and produces one result row per (axis value, mode).

#include <functional>
#include <string>
#include <vector>

#include "fmmw/config.hpp"
#include "fmmw/report.hpp"

namespace fmmw {

struct RunOptions {
  int threads = 0;  ///< simulation workers; 0 uses the OpenMP default
  std::function<void(const std::string&)> log;  ///< progress messages, may be empty
};

/// Copy of cfg with the swept quantity set to x.
ExperimentConfig at_axis_value(const ExperimentConfig& cfg, double x);

/// Rows ordered by axis value, then by the order of cfg.modes. Coverage rows
/// hold probabilities; rate rows hold Mbit/s.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace fmmw
