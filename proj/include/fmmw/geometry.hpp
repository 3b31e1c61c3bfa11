#pragma once

// Disk region geometry seen from a receiver at the origin, and the LOS/NLOS
// intensity measures of the region clipped to a ball around that receiver.
//
// Angles are measured at the origin from the direction pointing at the region
// centre, so boundary_radius(0) = D + d.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fmmw/errors.hpp"

namespace fmmw {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Tier { los, nlos };

inline const char* to_string(Tier t) { return t == Tier::los ? "LOS" : "NLOS"; }
inline Tier other(Tier t) { return t == Tier::los ? Tier::nlos : Tier::los; }

/// varphi() was asked for at a receiver sitting on the region centre.
class DegenerateCenter : public DomainError {
public:
  using DomainError::DomainError;
};

struct DiskGeometry {
  double radius = 50.0;  ///< D, metres
  double offset = 0.0;   ///< d, distance from the receiver to the centre, metres

  DiskGeometry() = default;
  DiskGeometry(double radius_m, double offset_m);

  double inner() const { return radius - offset; }  ///< D - d
  double outer() const { return radius + offset; }  ///< D + d
  bool centered() const { return offset == 0.0; }
  double area() const { return kPi * radius * radius; }
};

/// Probability that a link of length r is line-of-sight.
class BlockageModel {
public:
  /// p_L(r) = exp(-mu r), mu >= 0.
  static BlockageModel exponential(double mu);
  /// Arbitrary p_L; radial moments fall back to quadrature.
  static BlockageModel custom(std::function<double(double)> p_los, std::string label = "custom");
  /// p_L == 0: every link is NLOS.
  static BlockageModel never_los();

  double los_probability(double r) const;
  double nlos_probability(double r) const { return 1.0 - los_probability(r); }
  /// \int_0^r x p_L(x) dx
  double los_moment(double r) const;
  /// \int_0^r x (1 - p_L(x)) dx
  double nlos_moment(double r) const { return 0.5 * r * r - los_moment(r); }
  double moment(Tier t, double r) const { return t == Tier::los ? los_moment(r) : nlos_moment(r); }
  double probability(Tier t, double r) const { return t == Tier::los ? los_probability(r) : nlos_probability(r); }

  std::optional<double> exponent() const { return mu_; }
  const std::string& label() const { return label_; }

private:
  BlockageModel() = default;
  std::optional<double> mu_;
  std::shared_ptr<const std::function<double(double)>> custom_;
  std::string label_;
};

/// Half-angle of the arc of the circle |z| = r lying inside the region.
/// Requires d > 0 and D - d <= r <= D + d.
double varphi(double r, const DiskGeometry& geom);

/// Distance from the origin to the region boundary along direction theta.
double boundary_radius(double theta, const DiskGeometry& geom);

/// Area of the region intersected with the ball of radius r about the origin.
double intersection_area(double r, const DiskGeometry& geom);

/// LOS intensity measure of A ∩ b(o, r) divided by the transmitter intensity.
double los_measure(double r, const DiskGeometry& geom, const BlockageModel& blockage);
/// NLOS counterpart of los_measure.
double nlos_measure(double r, const DiskGeometry& geom, const BlockageModel& blockage);
/// d/dr of los_measure, in the boundary-arc form 2 varphi(r) r p_L(r).
double los_measure_derivative(double r, const DiskGeometry& geom, const BlockageModel& blockage);
double nlos_measure_derivative(double r, const DiskGeometry& geom, const BlockageModel& blockage);

/// Measures for a fixed (geometry, blockage) pair with the full-region totals cached.
class DiskMeasures {
public:
  DiskMeasures(DiskGeometry geom, BlockageModel blockage);

  double measure(Tier t, double r) const;
  double derivative(Tier t, double r) const;
  double total(Tier t) const { return t == Tier::los ? total_los_ : total_nlos_; }

  const DiskGeometry& geometry() const { return geom_; }
  const BlockageModel& blockage() const { return blockage_; }

private:
  DiskGeometry geom_;
  BlockageModel blockage_;
  double total_los_ = 0.0;
  double total_nlos_ = 0.0;
};

}  // namespace fmmw
