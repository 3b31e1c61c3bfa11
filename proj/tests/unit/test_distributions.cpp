#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"
#include "fmmw/distributions.hpp"
#include "fmmw/quadrature.hpp"
#include "unit/oracles.hpp"

using namespace fmmw;

namespace {

constexpr double kLambda = 0.004;
constexpr double kMu = 1.0 / 15.0;

DiskMeasures table_measures(double d, double mu = kMu) {
  return DiskMeasures(DiskGeometry(50.0, d), BlockageModel::exponential(mu));
}

double integrate(const std::function<double(double)>& f, double a, double b, std::vector<double> bps = {}) {
  quad::IntegrationSpec s;
  s.lower = a;
  s.upper = b;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-14;
  s.max_subdivisions = 2000;
  s.breakpoints = std::move(bps);
  return quad::integrate_1d(f, s);
}

// One shared brute-force run for the Table I geometry at d = 20: nearest
// points per tier and the max-average-power winner.
struct MonteCarloRun {
  static constexpr int trials = 1'000'000;
  int los_nonempty = 0;
  int los_within_10 = 0;
  int los_wins = 0;
  int nlos_wins = 0;
  std::vector<double> los_serving;
  std::vector<double> nlos_serving;
};

const MonteCarloRun& table_run() {
  static const MonteCarloRun run = [] {
    MonteCarloRun out;
    std::mt19937_64 gen(20240611);
    for (int t = 0; t < MonteCarloRun::trials; ++t) {
      const auto pts = oracle::ppp_disk(gen, kLambda, 50.0, 20.0);
      const auto n = oracle::nearest_by_tier(gen, pts, kMu);
      if (std::isfinite(n.los)) {
        ++out.los_nonempty;
        if (n.los <= 10.0) ++out.los_within_10;
      }
      if (!std::isfinite(n.los) && !std::isfinite(n.nlos)) continue;
      // ties go to LOS
      const bool los = std::isfinite(n.los) && (!std::isfinite(n.nlos) || std::pow(n.los, -2.0) >= std::pow(n.nlos, -4.0));
      if (los) {
        ++out.los_wins;
        out.los_serving.push_back(n.los);
      } else {
        ++out.nlos_wins;
        out.nlos_serving.push_back(n.nlos);
      }
    }
    return out;
  }();
  return run;
}

}  // namespace

TEST_CASE("regime classification") {
  CHECK(classify_regime(DiskGeometry(50, 20), PathlossModel(2, 4)) == RegimeCase::case1);
  CHECK(classify_regime(DiskGeometry(50, 20), PathlossModel(2, 2.2)) == RegimeCase::case2);
  CHECK(classify_regime(DiskGeometry(50, 45), PathlossModel(2, 4)) == RegimeCase::case2);
}

TEST_CASE("closest-point CDF: closed forms and support") {
  const auto m = table_measures(20.0);
  CHECK(closest_cdf(Tier::los, 70.0, kLambda, m) == 1.0);
  CHECK(closest_cdf(Tier::nlos, 0.0, kLambda, m) == 0.0);
  CHECK(closest_pdf(Tier::los, 75.0, kLambda, m) == 0.0);

  const auto flat = table_measures(0.0, 0.0);
  for (double r : {5.0, 20.0, 45.0}) {
    const double expect = -std::expm1(-kLambda * kPi * r * r) / -std::expm1(-kLambda * kPi * 2500.0);
    CHECK(closest_cdf(Tier::los, r, kLambda, flat) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(closest_cdf(Tier::nlos, 10.0, kLambda, flat), DomainError);
}

TEST_CASE("closest-point PDF integrates to one and differentiates the CDF") {
  const auto m = table_measures(20.0);
  for (Tier t : {Tier::los, Tier::nlos}) {
    const double mass = integrate([&](double r) { return closest_pdf(t, r, kLambda, m); }, 0.0, 70.0, {30.0});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
    const double h = 1e-5;
    for (double r : {3.0, 17.0, 29.0, 31.0, 44.0, 63.0}) {
      const double fd = (closest_cdf(t, r + h, kLambda, m) - closest_cdf(t, r - h, kLambda, m)) / (2 * h);
      CHECK(closest_pdf(t, r, kLambda, m) == doctest::Approx(fd).epsilon(1e-4));
    }
  }
}

TEST_CASE("closest LOS CDF at r = 10 matches brute-force sampling") {
  const auto& mc = table_run();
  const double empirical = static_cast<double>(mc.los_within_10) / mc.los_nonempty;
  CHECK(closest_cdf(Tier::los, 10.0, kLambda, table_measures(20.0)) == doctest::Approx(empirical).epsilon(0.003 / empirical));
}

TEST_CASE("association probabilities: degenerate blockage") {
  const double full = -std::expm1(-kLambda * kPi * 2500.0);
  const PathlossModel pl(2, 4);
  const auto all = association_probabilities(kLambda, table_measures(20.0, 0.0), pl);
  CHECK(all.los == doctest::Approx(full).epsilon(1e-9));
  CHECK(all.nlos == 0.0);
  const auto none = association_probabilities(
      kLambda, DiskMeasures(DiskGeometry(50, 20), BlockageModel::never_los()), pl);
  CHECK(none.los == 0.0);
  CHECK(none.nlos == doctest::Approx(full).epsilon(1e-9));
}

TEST_CASE("association probabilities match the arg-max rule by sampling") {
  const auto& mc = table_run();
  const auto a = association_probabilities(kLambda, table_measures(20.0), PathlossModel(2, 4));
  CHECK(a.regime == RegimeCase::case1);
  CHECK(std::abs(a.los - static_cast<double>(mc.los_wins) / mc.trials) < 0.003);
  CHECK(std::abs(a.nlos - static_cast<double>(mc.nlos_wins) / mc.trials) < 0.003);
}

TEST_CASE("association sum rule over random configurations") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double d = 49.9 * u(gen);
    const double mu = 0.2 * u(gen);
    const double al = 1.5 + 1.5 * u(gen);
    const double an = al + 0.1 + 2.5 * u(gen);
    const double lam = 1e-4 + 0.01 * u(gen);
    const auto a = association_probabilities(lam, table_measures(d, mu), PathlossModel(al, an));
    CHECK(std::abs(a.los + a.nlos + std::expm1(-lam * kPi * 2500.0)) < 1e-6);
  }
}

TEST_CASE("serving PDFs are normalized in both regimes") {
  for (double an : {4.0, 2.2}) {
    const ServingDistribution sd(kLambda, table_measures(20.0), PathlossModel(2, an));
    CHECK(sd.regime() == (an == 4.0 ? RegimeCase::case1 : RegimeCase::case2));
    for (Tier t : {Tier::los, Tier::nlos}) {
      const double mass = integrate([&](double r) { return sd.pdf(t, r); }, 0.0, 70.0, sd.breakpoints(t));
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
      CHECK(sd.pdf(t, 70.5) == 0.0);
      for (double r = 0.5; r < 70.0; r += 2.5) CHECK(sd.pdf(t, r) >= 0.0);
    }
  }
  const ServingDistribution all_los(kLambda, table_measures(20.0, 0.0), PathlossModel(2, 4));
  CHECK_THROWS_AS(all_los.pdf(Tier::nlos, 10.0), ZeroAssociation);
}

TEST_CASE("association is continuous across the regime boundary") {
  // (D-d)^(aN/aL) = D+d at aN = 2 ln 70 / ln 30
  const double critical = 2.0 * std::log(70.0) / std::log(30.0);
  const auto lo = association_probabilities(kLambda, table_measures(20.0), PathlossModel(2, critical - 1e-7));
  const auto hi = association_probabilities(kLambda, table_measures(20.0), PathlossModel(2, critical + 1e-7));
  CHECK(lo.regime != hi.regime);
  CHECK(std::abs(lo.los - hi.los) < 1e-5);
  CHECK(std::abs(lo.nlos - hi.nlos) < 1e-5);
}

TEST_CASE("interval-wise joint CCDF is the primitive of the joint density") {
  for (double an : {4.0, 2.2}) {
    for (double d : {20.0, 45.0}) {
      const ServingDistribution sd(kLambda, table_measures(d), PathlossModel(2, an));
      for (Tier t : {Tier::los, Tier::nlos}) {
        CHECK(detail::joint_serving_ccdf(t, 0.0, sd) == doctest::Approx(sd.association(t)).epsilon(1e-8));
        const double h = 1e-4;
        for (double r : {4.0, 12.0, 26.0, 38.0, 52.0, 66.0}) {
          const double fd = (detail::joint_serving_ccdf(t, r - h, sd) - detail::joint_serving_ccdf(t, r + h, sd)) / (2 * h);
          CHECK(sd.joint_density(t, r) == doctest::Approx(fd).epsilon(1e-5).scale(1e-9));
        }
      }
    }
  }
}

TEST_CASE("joint CCDF times association equals the sampled joint probability") {
  const auto& mc = table_run();
  const ServingDistribution sd(kLambda, table_measures(20.0), PathlossModel(2, 4));
  for (double r : {5.0, 10.0, 20.0, 35.0}) {
    long los_beyond = 0;
    for (double x : mc.los_serving) los_beyond += x > r;
    const double cond = detail::joint_serving_ccdf(Tier::los, r, sd) / sd.association(Tier::los);
    CHECK(std::abs(cond * sd.association(Tier::los) - static_cast<double>(los_beyond) / mc.trials) < 0.003);
  }
}

TEST_CASE("serving distances pass a chi-square test against the analytic PDF") {
  const auto& mc = table_run();
  const ServingDistribution sd(kLambda, table_measures(20.0), PathlossModel(2, 4));
  for (Tier t : {Tier::los, Tier::nlos}) {
    const auto& sample = t == Tier::los ? mc.los_serving : mc.nlos_serving;
    const int bins = 70;
    std::vector<double> observed(bins, 0.0), probs(bins, 0.0);
    for (double x : sample) observed[std::min(bins - 1, static_cast<int>(x))] += 1.0;
    for (int b = 0; b < bins; ++b) {
      std::vector<double> bps;
      for (double p : sd.breakpoints(t))
        if (p > b && p < b + 1) bps.push_back(p);
      probs[b] = integrate([&](double r) { return sd.pdf(t, r); }, b, b + 1.0, bps);
    }
    const double p = oracle::chi_square_pvalue(observed, probs, static_cast<double>(sample.size()));
    INFO("tier " << to_string(t) << " p-value " << p);
    CHECK(p > 0.01);
  }
}

TEST_CASE("association cache returns one shared object under concurrency") {
  AssociationCache cache;
  const auto m = table_measures(20.0);
  const PathlossModel pl(2, 4);
  std::vector<std::shared_ptr<const ServingDistribution>> got(4);
  std::vector<std::thread> workers;
  for (int i = 0; i < 4; ++i) workers.emplace_back([&, i] { got[i] = cache.get(kLambda, m, pl); });
  for (auto& w : workers) w.join();
  for (const auto& g : got) CHECK(g->association(Tier::los) == got[0]->association(Tier::los));
  CHECK(cache.get(kLambda, m, pl) == cache.get(kLambda, m, pl));
  CHECK(cache.size() == 1);
}
