#include "fmmw/interference.hpp"

#include <algorithm>
#include <cmath>

namespace fmmw {

double window_overlap(double center, double half, double arc) {
  arc = std::clamp(arc, 0.0, kPi);
  if (half <= 0.0) return 0.0;
  if (half >= kPi) return 2.0 * arc;
  center = std::remainder(center, kTwoPi);
  double total = 0.0;
  for (int k = -1; k <= 1; ++k) {
    const double lo = std::max(center - half + k * kTwoPi, -arc);
    const double hi = std::min(center + half + k * kTwoPi, arc);
    total += std::max(0.0, hi - lo);
  }
  return std::min(total, 2.0 * arc);
}

InterfererGeometry InterfererGeometry::locate(double x, double theta, const DiskGeometry& geom, double serving_r) {
  const double d = geom.offset;
  InterfererGeometry ig;
  ig.x = x;
  ig.theta = theta;
  ig.d_hat = std::sqrt(std::max(0.0, d * d + x * x - 2.0 * d * x * std::cos(theta)));
  ig.serving_r = serving_r;
  return ig;
}

namespace {

// Half-angle at a point with centre offset `off` of the arc of the circle of
// radius `rho` about it that lies inside the region of radius D.
double arc_half_angle(double rho, double off, double D) {
  if (off <= 0.0 || rho <= D - off) return kPi;
  if (rho >= D + off) return 0.0;
  return std::acos(std::clamp((rho * rho + off * off - D * D) / (2.0 * off * rho), -1.0, 1.0));
}

double arc_probability(double center, double beamwidth, double arc) {
  if (arc < 1e-12) return std::abs(std::remainder(center, kTwoPi)) < 0.5 * beamwidth ? 1.0 : 0.0;
  return window_overlap(center, 0.5 * beamwidth, arc) / (2.0 * arc);
}

// Angle at the interferer between the directions to the origin and to the centre.
double transmit_angle(double x, double d_hat, double d) {
  if (d_hat <= 0.0 || x <= 0.0) return 0.0;
  return std::acos(std::clamp((x * x + d_hat * d_hat - d * d) / (2.0 * x * d_hat), -1.0, 1.0));
}

// 1 - (1 + s a x^-alpha / v)^-v without cancellation.
double kernel_complement(double s, double a, double x_pow, int v) {
  return -std::expm1(-v * std::log1p(s * a * x_pow / v));
}

constexpr std::array<double, 5> kGlx = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                        0.9061798459386640};
constexpr std::array<double, 5> kGlw = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                        0.2369268850561891, 0.2369268850561891};

}  // namespace

double receive_main_probability(double theta, double r, const DiskGeometry& geom, double beamwidth_rx) {
  const double arc = geom.centered() ? kPi : arc_half_angle(r, geom.offset, geom.radius);
  return arc_probability(std::abs(std::remainder(theta, kTwoPi)), beamwidth_rx, arc);
}

double transmit_main_probability(double phi_hat, double d_hat, double y, double radius, double beamwidth_tx) {
  return arc_probability(phi_hat, beamwidth_tx, arc_half_angle(y, d_hat, radius));
}

BeamProbabilities beam_angles(const InterfererGeometry& ig, double y_r, const DiskGeometry& geom,
                              const AntennaPattern& tx, const AntennaPattern& rx) {
  if (!(y_r > 0.0) || y_r > geom.radius + ig.d_hat + 1e-9 * geom.radius)
    throw DomainError("beam_angles: served distance outside (0, D + d_hat]");
  if (ig.d_hat > geom.radius * (1.0 + 1e-9)) throw DomainError("beam_angles: interferer outside the region");
  BeamProbabilities out;
  out.c = transmit_main_probability(transmit_angle(ig.x, ig.d_hat, geom.offset), ig.d_hat, y_r, geom.radius,
                                    tx.beamwidth);
  out.dcoef = receive_main_probability(ig.theta, ig.serving_r, geom, rx.beamwidth);
  return out;
}

GainMixture GainMixture::combine(double c, double dcoef, const GainLevels& levels) {
  GainMixture m;
  m.levels = levels;
  m.probs = {c * dcoef, c * (1.0 - dcoef), (1.0 - c) * dcoef, (1.0 - c) * (1.0 - dcoef)};
  return m;
}

double GainMixture::nakagami_mgf(double s, double x, double alpha, int v) const {
  const double xp = std::pow(x, -alpha);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) sum += probs[k] * std::pow(1.0 + s * levels[k + 1] * xp / v, -v);
  return sum;
}

GainMixture gain_mixture(const InterfererGeometry& ig, double y_r, const DiskGeometry& geom, const AntennaPattern& tx,
                         const AntennaPattern& rx) {
  const auto b = beam_angles(ig, y_r, geom, tx, rx);
  return GainMixture::combine(b.c, b.dcoef, GainLevels::from_patterns(tx, rx));
}

double served_distance_pdf(double d_hat, double y, const NetworkConfig& cfg) {
  const ServingDistribution sd(cfg.lambda_tx, DiskMeasures(DiskGeometry(cfg.radius, d_hat), cfg.blockage()),
                               cfg.pathloss);
  const double total = sd.association(Tier::los) + sd.association(Tier::nlos);
  if (!(total > 1e-300)) throw ZeroAssociation("served_distance_pdf: no receiver is ever associated");
  return (sd.joint_density(Tier::los, y) + sd.joint_density(Tier::nlos, y)) / total;
}

double exclusion_radius(Tier serving, Tier interferer, double r, const PathlossModel& pathloss) {
  if (serving == interferer) return r;
  return serving == Tier::los ? std::pow(r, pathloss.ratio()) : std::pow(r, 1.0 / pathloss.ratio());
}

InterferenceModel::InterferenceModel(const NetworkConfig& cfg, InterferenceOptions opt)
    : cfg_(cfg), opt_(opt), tx_(cfg.tx_pattern()), rx_(cfg.rx_pattern()), levels_(GainLevels::from_patterns(tx_, rx_)),
      blockage_(cfg.blockage()) {
  if (opt_.offset_points < 4 || opt_.distance_points < 4 || opt_.direction_points < 4 || opt_.panels < 1)
    throw DomainError("InterferenceModel: table sizes too small");
  if (cfg_.lambda_tx <= 0.0) return;

  const double D = cfg_.radius;
  const auto offsets = quad::linspace(0.0, D, opt_.offset_points);
  const auto us = quad::linspace(0.0, 1.0, opt_.distance_points);
  const auto phis = quad::linspace(0.0, kPi, opt_.direction_points);
  const std::size_t nd = offsets.size(), nu = us.size(), np = phis.size();
  std::vector<double> served(nd * nu, 0.0), beam(nd * np, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < nd; ++i) {
    const double dh = offsets[i];
    const ServingDistribution sd(cfg_.lambda_tx, DiskMeasures(DiskGeometry(D, dh), blockage_), cfg_.pathloss);
    const double total = sd.association(Tier::los) + sd.association(Tier::nlos);
    auto pdf = [&](double y) {
      return (sd.joint_density(Tier::los, y) + sd.joint_density(Tier::nlos, y)) / total;
    };
    const double top = D + dh;
    for (std::size_t j = 0; j < nu; ++j) served[i * nu + j] = top * pdf(us[j] * top);

    // Composite Gauss-Legendre nodes on [0, D + d_hat], split where the density changes form.
    std::vector<double> cuts = {0.0, top};
    for (Tier t : {Tier::los, Tier::nlos})
      for (double b : sd.breakpoints(t)) cuts.push_back(b);
    if (D - dh > 0.0) cuts.push_back(D - dh);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> ny, nw;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      const auto panels = static_cast<std::size_t>(std::ceil(opt_.panels * (b - a) / top));
      const double h = (b - a) / static_cast<double>(std::max<std::size_t>(panels, 1));
      for (std::size_t p = 0; p < std::max<std::size_t>(panels, 1); ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int g = 0; g < 5; ++g) {
          const double y = mid + 0.5 * h * kGlx[g];
          ny.push_back(y);
          nw.push_back(0.5 * h * kGlw[g] * pdf(y));
        }
      }
    }
    double mass = 0.0;
    for (double w : nw) mass += w;
    for (std::size_t j = 0; j < np; ++j) {
      double acc = 0.0;
      for (std::size_t n = 0; n < ny.size(); ++n)
        acc += nw[n] * transmit_main_probability(phis[j], dh, ny[n], D, tx_.beamwidth);
      beam[i * np + j] = acc / mass;
    }
  }
  served_ = quad::Tabulation({offsets, us}, std::move(served), quad::Interpolation::cubic);
  main_beam_ = quad::Tabulation({offsets, phis}, std::move(beam), quad::Interpolation::cubic);
}

double InterferenceModel::served_distance_pdf(double d_hat, double y) const {
  if (served_.empty()) throw ZeroAssociation("served_distance_pdf: the transmitter process is empty");
  const double top = cfg_.radius + d_hat;
  if (y < 0.0 || y > top) return 0.0;
  return std::max(0.0, served_(d_hat, y / top) / top);
}

double InterferenceModel::mean_main_beam(double d_hat, double phi_hat) const {
  if (main_beam_.empty()) return tx_.main_fraction();
  return std::clamp(main_beam_(d_hat, phi_hat), 0.0, 1.0);
}

double InterferenceModel::direct_mixture(double d_hat, double phi_hat, double dcoef,
                                         const std::array<double, 4>& comp) const {
  const double D = cfg_.radius;
  const double top = D + d_hat;
  const double w = 0.5 * tx_.beamwidth;
  std::vector<double> bps;
  if (D - d_hat > 0.0) bps.push_back(D - d_hat);
  // served distances at which a lobe edge meets the end of the admissible arc
  for (double edge : {phi_hat - w, phi_hat + w}) {
    const double a = std::abs(std::remainder(edge, kTwoPi));
    const double sa = std::sin(a);
    const double y = d_hat * std::cos(a) + std::sqrt(std::max(0.0, D * D - d_hat * d_hat * sa * sa));
    if (y > D - d_hat && y < top) bps.push_back(y);
  }
  const double rho = cfg_.pathloss.ratio();
  for (double p : {std::pow(D - d_hat, 1.0 / rho), std::pow(D - d_hat, rho), std::pow(top, rho)})
    if (p > 0.0 && p < top) bps.push_back(p);

  quad::IntegrationSpec spec;
  spec.lower = 0.0;
  spec.upper = top;
  spec.rel_tol = 0.1 * opt_.rel_tol;
  spec.abs_tol = 1e-12;
  spec.max_subdivisions = 400;
  spec.breakpoints = bps;
  return quad::integrate_1d(
      [&](double y) {
        const double c = transmit_main_probability(phi_hat, d_hat, y, D, tx_.beamwidth);
        const auto m = GainMixture::combine(c, dcoef, levels_);
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) sum += m.probs[k] * comp[k];
        return sum * served_distance_pdf(d_hat, y);
      },
      spec);
}

std::shared_ptr<const InterferenceModel::Profile> InterferenceModel::profile(double d) const {
  {
    std::shared_lock lock(profiles_->mutex);
    if (auto it = profiles_->entries.find(d); it != profiles_->entries.end()) return it->second;
  }
  auto p = std::make_shared<Profile>();
  p->geom = DiskGeometry(cfg_.radius, d);
  const auto& g = p->geom;
  std::vector<std::pair<double, double>> segs;
  if (g.inner() > 0.0) segs.emplace_back(0.0, g.inner());
  if (!g.centered()) segs.emplace_back(g.inner(), g.outer());
  const std::size_t nx = std::max<std::size_t>(opt_.profile_points, 4);
  const auto us = quad::linspace(0.0, 1.0, opt_.direction_points);
  const std::size_t nu = us.size();
  for (const auto& [lo, hi] : segs) {
    const auto xs = quad::linspace(lo, hi, nx);
    std::vector<double> v0(nx * nu, 0.0), v1(nx * nu, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = xs[i];
      const double psi = (g.centered() || x <= g.inner()) ? kPi : varphi(std::min(x, g.outer()), g);
      auto cbar = [&](double theta) {
        const double dh = std::sqrt(std::max(0.0, d * d + x * x - 2.0 * d * x * std::cos(theta)));
        return mean_main_beam(dh, transmit_angle(x, dh, d));
      };
      double acc0 = 0.0, acc1 = 0.0;
      for (std::size_t j = 1; j < nu; ++j) {
        const double t0 = us[j - 1] * psi, t1 = us[j] * psi;
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        for (int q = 0; q < 5; ++q) {
          const double t = mid + half * kGlx[q];
          const double c = cbar(t);
          acc0 += half * kGlw[q] * c;
          acc1 += half * kGlw[q] * c * t;
        }
        v0[i * nu + j] = acc0;
        v1[i * nu + j] = acc1;
      }
    }
    p->m0.emplace_back(std::vector<std::vector<double>>{xs, us}, std::move(v0), quad::Interpolation::cubic);
    p->m1.emplace_back(std::vector<std::vector<double>>{xs, us}, std::move(v1), quad::Interpolation::cubic);
    p->seg_hi.push_back(hi);
  }
  std::unique_lock lock(profiles_->mutex);
  if (profiles_->entries.size() >= 256) profiles_->entries.clear();
  return profiles_->entries.emplace(d, std::move(p)).first->second;
}

InterferenceModel::AngularWeights InterferenceModel::weights(const Profile& p, double x, double fixed_c,
                                                             bool tabulated_c, double rx_arc) const {
  const auto& g = p.geom;
  AngularWeights w;
  if (x >= g.outer()) return w;
  const double psi = (g.centered() || x <= g.inner()) ? kPi : varphi(x, g);
  w.a0 = psi;
  std::size_t seg = 0;
  while (seg + 1 < p.seg_hi.size() && x > p.seg_hi[seg]) ++seg;
  auto m0 = [&](double t) { return tabulated_c ? p.m0[seg](x, t / psi) : fixed_c * t; };
  auto m1 = [&](double t) { return tabulated_c ? p.m1[seg](x, t / psi) : 0.5 * fixed_c * t * t; };
  w.a1 = m0(psi);

  const double half = 0.5 * rx_.beamwidth;
  if (rx_arc >= kPi) {
    const double dc = std::min(1.0, rx_.beamwidth / kTwoPi);
    w.h = dc * w.a0;
    w.k = dc * w.a1;
    return w;
  }
  // the receive coefficient is piecewise linear in theta
  std::vector<double> cuts = {0.0, psi};
  for (double b : {rx_arc - half, half - rx_arc, rx_arc + half, kTwoPi - rx_arc - half})
    if (b > 0.0 && b < psi) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  auto dcoef = [&](double theta) {
    if (rx_arc < 1e-12) return std::abs(theta) < half ? 1.0 : 0.0;
    return window_overlap(theta, half, rx_arc) / (2.0 * rx_arc);
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t0 = cuts[i], t1 = cuts[i + 1];
    if (t1 <= t0) continue;
    const double ta = t0 + 0.25 * (t1 - t0), tb = t0 + 0.75 * (t1 - t0);
    const double fa = dcoef(ta), fb = dcoef(tb);
    const double slope = (fb - fa) / (tb - ta);
    const double icpt = fa - slope * ta;
    w.h += icpt * (t1 - t0) + 0.5 * slope * (t1 * t1 - t0 * t0);
    w.k += icpt * (m0(t1) - m0(t0)) + slope * (m1(t1) - m1(t0));
  }
  return w;
}

double InterferenceModel::exponent(Path path, Tier serving, Tier interferer, double s, double r, double d) const {
  if (s < 0.0) throw DomainError("laplace_transform: s must be >= 0");
  if (cfg_.lambda_tx <= 0.0 || s == 0.0) return 0.0;
  const DiskGeometry g(cfg_.radius, d);
  if (!(d >= 0.0) || d > cfg_.radius) throw DomainError("laplace_transform: receiver offset outside [0, D]");
  if (!(r > 0.0) || r > g.outer()) throw DomainError("laplace_transform: r outside the serving support");
  if (path == Path::direct) return direct_exponent(serving, interferer, s, r, d);
  const double rex = exclusion_radius(serving, interferer, r, cfg_.pathloss);
  if (rex >= g.outer()) return 0.0;

  const auto prof = profile(d);
  const double alpha = cfg_.pathloss.exponent(interferer);
  const int v = cfg_.fading.order(interferer);
  const bool strong_main = tx_.main_gain >= tx_.side_gain;
  const double fixed_c = path == Path::lower ? (strong_main ? 1.0 : 0.0) : (strong_main ? 0.0 : 1.0);
  const double rx_arc = (g.centered() || r <= g.inner()) ? kPi : varphi(r, g);

  auto integrand = [&](double x) {
    const auto w = weights(*prof, x, fixed_c, path == Path::tabulated, rx_arc);
    const double xp = std::pow(x, -alpha);
    std::array<double, 4> comp;
    for (int k = 0; k < 4; ++k) comp[k] = kernel_complement(s, levels_[k + 1], xp, v);
    const double mix = comp[0] * w.k + comp[1] * (w.a1 - w.k) + comp[2] * (w.h - w.k) +
                       comp[3] * (w.a0 - w.a1 - w.h + w.k);
    return mix * blockage_.probability(interferer, x) * x;
  };

  quad::IntegrationSpec spec;
  spec.lower = rex;
  spec.upper = g.outer();
  spec.rel_tol = opt_.rel_tol;
  spec.abs_tol = 1e-13 * g.area();
  spec.max_subdivisions = 400;
  if (g.inner() > rex) spec.breakpoints.push_back(g.inner());
  if (!g.centered() && rx_arc < kPi) {
    // distances at which the boundary arc meets a kink of the receive coefficient
    const double half = 0.5 * rx_.beamwidth;
    for (double b : {rx_arc - half, half - rx_arc, rx_arc + half, kTwoPi - rx_arc - half})
      if (b > 0.0 && b < kPi) {
        const double x = boundary_radius(b, g);
        if (x > rex && x < g.outer()) spec.breakpoints.push_back(x);
      }
  }
  return 2.0 * cfg_.lambda_tx * quad::integrate_1d(integrand, spec);
}

double InterferenceModel::direct_exponent(Tier serving, Tier interferer, double s, double r, double d) const {
  const DiskGeometry g(cfg_.radius, d);
  const double rex = exclusion_radius(serving, interferer, r, cfg_.pathloss);
  if (rex >= g.outer()) return 0.0;

  const double theta_max = (g.centered() || rex < g.inner()) ? kPi : varphi(rex, g);
  const double alpha = cfg_.pathloss.exponent(interferer);
  const int v = cfg_.fading.order(interferer);
  const bool rx_arc_full = g.centered() || r <= g.inner();
  const double dc_full = std::min(1.0, rx_.beamwidth / kTwoPi);

  auto integrand = [&](double theta, double x) {
    const double xp = std::pow(x, -alpha);
    std::array<double, 4> comp;
    for (int k = 0; k < 4; ++k) comp[k] = kernel_complement(s, levels_[k + 1], xp, v);
    const double dc = rx_arc_full ? dc_full : receive_main_probability(theta, r, g, rx_.beamwidth);
    const double dh = std::sqrt(std::max(0.0, d * d + x * x - 2.0 * d * x * std::cos(theta)));
    return direct_mixture(dh, transmit_angle(x, dh, d), dc, comp) * blockage_.probability(interferer, x) * x;
  };

  const double tol = opt_.rel_tol;
  auto radial = [&](double theta, double rel) {
    quad::IntegrationSpec spec;
    spec.lower = rex;
    spec.upper = std::max(rex, boundary_radius(theta, g));
    spec.rel_tol = rel;
    spec.abs_tol = 1e-13 * g.area();
    spec.max_subdivisions = 400;
    return quad::integrate_1d([&](double x) { return integrand(theta, x); }, spec);
  };

  if (g.centered()) return cfg_.lambda_tx * kTwoPi * radial(0.0, tol);

  quad::IntegrationSpec outer;
  outer.lower = 0.0;
  outer.upper = theta_max;
  outer.rel_tol = tol;
  outer.abs_tol = 1e-12 * g.area();
  outer.max_subdivisions = 400;
  if (!rx_arc_full) {
    const double arc = varphi(std::min(r, g.outer()), g);
    const double w = 0.5 * rx_.beamwidth;
    outer.breakpoints = {arc - w, w - arc, arc + w, kTwoPi - arc - w};
  }
  return 2.0 * cfg_.lambda_tx * quad::integrate_1d([&](double theta) { return radial(theta, tol / 10.0); }, outer);
}

double InterferenceModel::laplace_exponent(Tier serving, Tier interferer, double s, double r, double d) const {
  return exponent(Path::tabulated, serving, interferer, s, r, d);
}

double InterferenceModel::laplace_transform(Tier serving, Tier interferer, double s, double r, double d) const {
  return std::exp(-exponent(Path::tabulated, serving, interferer, s, r, d));
}

double InterferenceModel::laplace_transform_bound(BoundKind kind, Tier serving, Tier interferer, double s, double r,
                                                  double d) const {
  return std::exp(-exponent(kind == BoundKind::lower ? Path::lower : Path::upper, serving, interferer, s, r, d));
}

double InterferenceModel::laplace_transform_direct(Tier serving, Tier interferer, double s, double r, double d) const {
  return std::exp(-exponent(Path::direct, serving, interferer, s, r, d));
}

}  // namespace fmmw
