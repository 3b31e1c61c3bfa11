#include "fmmw/quadrature.hpp"

#include <numeric>
#include <stdexcept>

namespace fmmw::quad {

namespace {

// Marks an error that already carries the depth it originated from.
class TaggedNonConvergence : public NonConvergence {
public:
  using NonConvergence::NonConvergence;
};

double integrate_level(const std::function<double(std::span<const double>)>& f, std::span<const NestedLevel> levels,
                       std::size_t depth, std::vector<double>& vars, double rel_tol, double abs_tol) {
  const auto& level = levels[depth];
  const auto outer = std::span<const double>(vars.data(), depth);
  const auto [lo, hi] = level.limits(outer);
  if (!(hi > lo)) return 0.0;

  IntegrationSpec spec;
  spec.lower = lo;
  spec.upper = hi;
  spec.rel_tol = rel_tol;
  spec.abs_tol = abs_tol;
  spec.max_subdivisions = level.max_subdivisions;
  if (level.breakpoints) spec.breakpoints = level.breakpoints(outer);

  const bool innermost = depth + 1 == levels.size();
  auto integrand = [&](double t) {
    vars[depth] = t;
    if (innermost) return f(std::span<const double>(vars.data(), vars.size()));
    return integrate_level(f, levels, depth + 1, vars, rel_tol / 10.0, abs_tol / 10.0);
  };
  try {
    return integrate_1d(integrand, spec);
  } catch (const TaggedNonConvergence&) {
    throw;
  } catch (const NonConvergence& e) {
    throw TaggedNonConvergence("integrate_nested: level " + std::to_string(depth) + ": " + e.what(),
                               static_cast<int>(depth), e.error_estimate());
  }
}

}  // namespace

double integrate_nested(const std::function<double(std::span<const double>)>& f, std::span<const NestedLevel> levels,
                        double rel_tol, double abs_tol) {
  if (levels.empty() || levels.size() > 3) throw DomainError("integrate_nested: depth must be between 1 and 3");
  for (const auto& level : levels)
    if (!level.limits) throw DomainError("integrate_nested: every level needs a limit function");
  std::vector<double> vars(levels.size(), 0.0);
  try {
    return integrate_level(f, levels, 0, vars, rel_tol, abs_tol);
  } catch (const TaggedNonConvergence& e) {
    throw NonConvergence(e.what(), e.level(), e.error_estimate());
  }
}

Tabulation::Tabulation(std::vector<std::vector<double>> axes, std::vector<double> values, Interpolation order)
    : axes_(std::move(axes)), values_(std::move(values)), order_(order) {
  if (axes_.empty()) throw DomainError("Tabulation: at least one axis is required");
  std::size_t total = 1;
  for (const auto& ax : axes_) {
    if (ax.size() < 2) throw DomainError("Tabulation: each axis needs at least two points");
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (!(ax[i] > ax[i - 1])) throw DomainError("Tabulation: axes must be strictly increasing");
    total *= ax.size();
  }
  if (values_.size() != total) throw DomainError("Tabulation: value count does not match the grid shape");
  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * axes_[i].size();
}

namespace {

struct Stencil {
  std::array<std::size_t, 4> index{};
  std::array<double, 4> weight{};
  int size = 0;
};

Stencil make_stencil(const std::vector<double>& ax, double x, Interpolation order) {
  const std::size_t n = ax.size();
  x = std::clamp(x, ax.front(), ax.back());
  std::size_t i = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), x) - ax.begin());
  i = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, n - 2);

  Stencil s;
  if (order == Interpolation::linear || n < 4) {
    const double t = (x - ax[i]) / (ax[i + 1] - ax[i]);
    s.index = {i, i + 1, 0, 0};
    s.weight = {1.0 - t, t, 0.0, 0.0};
    s.size = 2;
    return s;
  }
  // Four-point Lagrange cubic, shifted inward at the ends.
  std::size_t first = i == 0 ? 0 : i - 1;
  if (first + 3 >= n) first = n - 4;
  for (int k = 0; k < 4; ++k) {
    const std::size_t ik = first + static_cast<std::size_t>(k);
    double w = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m == k) continue;
      const std::size_t im = first + static_cast<std::size_t>(m);
      w *= (x - ax[im]) / (ax[ik] - ax[im]);
    }
    s.index[static_cast<std::size_t>(k)] = ik;
    s.weight[static_cast<std::size_t>(k)] = w;
  }
  s.size = 4;
  return s;
}

}  // namespace

double Tabulation::operator()(std::span<const double> point) const {
  if (point.size() != axes_.size()) throw DomainError("Tabulation: point rank does not match the grid");
  std::array<Stencil, 3> st;
  if (axes_.size() > st.size()) throw DomainError("Tabulation: at most three axes are supported");
  for (std::size_t a = 0; a < axes_.size(); ++a) st[a] = make_stencil(axes_[a], point[a], order_);

  double sum = 0.0;
  const int n0 = st[0].size;
  const int n1 = axes_.size() > 1 ? st[1].size : 1;
  const int n2 = axes_.size() > 2 ? st[2].size : 1;
  for (int i = 0; i < n0; ++i) {
    const std::size_t base0 = st[0].index[i] * strides_[0];
    const double w0 = st[0].weight[i];
    for (int j = 0; j < n1; ++j) {
      const std::size_t base1 = axes_.size() > 1 ? base0 + st[1].index[j] * strides_[1] : base0;
      const double w1 = axes_.size() > 1 ? w0 * st[1].weight[j] : w0;
      for (int k = 0; k < n2; ++k) {
        const std::size_t idx = axes_.size() > 2 ? base1 + st[2].index[k] * strides_[2] : base1;
        const double w2 = axes_.size() > 2 ? w1 * st[2].weight[k] : w1;
        sum += w2 * values_[idx];
      }
    }
  }
  return sum;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw DomainError("linspace: need at least two points");
  std::vector<double> out(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + h * static_cast<double>(i);
  out.back() = b;
  return out;
}

}  // namespace fmmw::quad
