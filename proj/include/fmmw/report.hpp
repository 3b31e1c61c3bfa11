#pragma once

// Result rows and their CSV / SVG renderings.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fmmw/config.hpp"

namespace fmmw {

struct ResultRow {
  double axis_value = 0.0;
  ResultMode mode = ResultMode::analytic;
  double value = 0.0;
  std::optional<double> ci95;  ///< half-width, simulation rows only
  double wall_ms = 0.0;
};

/// 9 significant digits, "%.9g" style.
std::string format_value(double x);

/// Header `axis,mode,value,ci95,wall_ms`. With timing off the wall_ms
/// column is left empty so that output is byte-stable.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing = true);

struct PlotLabels {
  std::string x;
  std::string y;
  std::string title;
};

/// Line plot with one polyline per mode.
void write_svg(std::ostream& out, const std::vector<ResultRow>& rows, const PlotLabels& labels);

}  // namespace fmmw
