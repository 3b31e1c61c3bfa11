#include "fmmw/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace fmmw {

std::string format_value(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool timing) {
  out << "axis,mode,value,ci95,wall_ms\n";
  for (const auto& r : rows) {
    out << format_value(r.axis_value) << ',' << to_string(r.mode) << ',' << format_value(r.value) << ',';
    if (r.ci95) out << format_value(*r.ci95);
    out << ',';
    if (timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
      out << buf;
    }
    out << '\n';
  }
}

namespace {

// 1, 2 or 5 times a power of ten, giving about `target` intervals
double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* colour(ResultMode m) {
  switch (m) {
    case ResultMode::analytic: return "#1f77b4";
    case ResultMode::mc: return "#d62728";
    case ResultMode::lower: return "#2ca02c";
    case ResultMode::upper: return "#9467bd";
  }
  return "#000000";
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<ResultRow>& rows, const PlotLabels& labels) {
  constexpr double W = 640, H = 420, L = 70, R = 130, T = 40, B = 55;
  const double pw = W - L - R, ph = H - T - B;

  std::map<ResultMode, std::vector<std::pair<double, double>>> series;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& r : rows) {
    series[r.mode].emplace_back(r.axis_value, r.value);
    if (first) {
      x0 = x1 = r.axis_value;
      y0 = y1 = r.value;
      first = false;
    }
    x0 = std::min(x0, r.axis_value);
    x1 = std::max(x1, r.axis_value);
    y0 = std::min(y0, r.value);
    y1 = std::max(y1, r.value);
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  const double xs = nice_step(x1 - x0, 8), ys = nice_step(y1 - y0, 6);
  y0 = std::floor(y0 / ys) * ys;
  y1 = std::ceil(y1 / ys) * ys;

  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!labels.title.empty())
    out << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(labels.title) << "</text>\n";

  // grid and tick labels
  for (double x = std::ceil(x0 / xs - 1e-9) * xs; x <= x1 + 1e-9 * xs; x += xs) {
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << T << "\" x2=\"" << num(px(x)) << "\" y2=\"" << T + ph
        << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">"
        << format_value(std::abs(x) < 1e-12 * xs ? 0.0 : x) << "</text>\n";
  }
  for (double y = y0; y <= y1 + 1e-9 * ys; y += ys) {
    out << "<line x1=\"" << L << "\" y1=\"" << num(py(y)) << "\" x2=\"" << L + pw << "\" y2=\"" << num(py(y))
        << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
        << format_value(std::abs(y) < 1e-12 * ys ? 0.0 : y) << "</text>\n";
  }
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(labels.x)
      << "</text>\n";
  out << "<text transform=\"translate(18," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(labels.y) << "</text>\n";

  int slot = 0;
  for (auto& [mode, pts] : series) {
    std::sort(pts.begin(), pts.end());
    out << "<polyline fill=\"none\" stroke=\"" << colour(mode) << "\" stroke-width=\"1.8\"";
    if (mode == ResultMode::mc) out << " stroke-dasharray=\"5,3\"";
    out << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      out << (i ? " " : "") << num(px(pts[i].first)) << ',' << num(py(pts[i].second));
    out << "\"/>\n";
    const double ly = T + 10 + 20 * slot++;
    out << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour(mode) << "\" stroke-width=\"1.8\"/>\n";
    out << "<text x=\"" << L + pw + 46 << "\" y=\"" << ly + 4 << "\">" << to_string(mode) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace fmmw
