#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with explicit breakpoints, nested
// integration over dependent limits, and dense grid tabulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fmmw/errors.hpp"

namespace fmmw::quad {

struct IntegrationSpec {
  double lower = 0.0;
  double upper = 0.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  /// Points inside (lower, upper) where the integrand may have a kink or jump.
  /// The interval is split there before any adaptive bisection.
  std::vector<double> breakpoints;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae on [0,1] (symmetric), Kronrod weights, Gauss weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// One G7K15 panel with the QUADPACK error heuristic.
template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double ahalf = std::abs(half);
  const double value = resk * half;
  resabs *= ahalf;
  resasc *= ahalf;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err};
}

inline void validate(const IntegrationSpec& spec) {
  if (!(spec.lower <= spec.upper)) throw DomainError("integrate: lower limit exceeds upper limit");
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) throw DomainError("integrate: tolerances must be positive");
  if (spec.max_subdivisions < 1) throw DomainError("integrate: subdivision budget must be positive");
}

}  // namespace detail

/// Integrates f over [spec.lower, spec.upper]; throws NonConvergence when the
/// subdivision budget is exhausted with the error above max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate_1d_detailed(F&& f, const IntegrationSpec& spec) {
  detail::validate(spec);
  QuadratureResult out;
  if (spec.lower == spec.upper) return out;

  std::vector<double> cuts;
  cuts.reserve(spec.breakpoints.size() + 2);
  cuts.push_back(spec.lower);
  for (double p : spec.breakpoints)
    if (p > spec.lower && p < spec.upper) cuts.push_back(p);
  cuts.push_back(spec.upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto seg = detail::gk15(f, cuts[i], cuts[i + 1]);
    total += seg.value;
    total_err += seg.error;
    heap.push(seg);
  }
  int evaluations = 15 * static_cast<int>(heap.size());
  int count = static_cast<int>(heap.size());

  auto converged = [&] { return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  while (!converged()) {
    if (count >= spec.max_subdivisions) {
      throw NonConvergence("integrate_1d: subdivision budget exhausted on [" + std::to_string(spec.lower) + ", " +
                               std::to_string(spec.upper) + "], error estimate " + std::to_string(total_err),
                           0, total_err);
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    evaluations += 30;
    ++count;
  }

  // Re-sum to shed the drift of the running totals.
  out.value = 0.0;
  out.error = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    heap.pop();
  }
  out.evaluations = evaluations;
  return out;
}

template <class F>
double integrate_1d(F&& f, const IntegrationSpec& spec) {
  return integrate_1d_detailed(std::forward<F>(f), spec).value;
}

/// One level of a nested integral. Limits and breakpoints may depend on the
/// values of the enclosing (outer) integration variables.
struct NestedLevel {
  std::function<std::pair<double, double>(std::span<const double> outer)> limits;
  std::function<std::vector<double>(std::span<const double> outer)> breakpoints;
  int max_subdivisions = 200;
};

/// Fubini-ordered nested integration, outermost level first (depth <= 3).
/// Each inner level runs at one tenth of the tolerance of its parent.
double integrate_nested(const std::function<double(std::span<const double>)>& f, std::span<const NestedLevel> levels,
                        double rel_tol = 1e-8, double abs_tol = 1e-12);

enum class Interpolation { linear, cubic };

/// Dense values on a tensor grid of strictly increasing axes (row-major, last
/// axis fastest). Queries outside the grid are clamped to its boundary.
class Tabulation {
public:
  Tabulation() = default;
  Tabulation(std::vector<std::vector<double>> axes, std::vector<double> values,
             Interpolation order = Interpolation::cubic);

  double operator()(std::span<const double> point) const;
  double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }
  double operator()(double x, double y) const {
    const double p[2] = {x, y};
    return (*this)(std::span<const double>(p, 2));
  }

  std::size_t rank() const { return axes_.size(); }
  const std::vector<double>& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<double>& values() const { return values_; }
  Interpolation order() const { return order_; }
  bool empty() const { return values_.empty(); }

private:
  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
  Interpolation order_ = Interpolation::cubic;
};

/// n equally spaced points covering [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace fmmw::quad
