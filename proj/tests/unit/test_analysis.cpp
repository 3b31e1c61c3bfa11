#include <cmath>
#include <vector>

#include "doctest.h"
#include "fmmw/analysis.hpp"

using namespace fmmw;

namespace {

const CoverageAnalyzer& table_analyzer() {
  static const CoverageAnalyzer a{NetworkConfig{}};
  return a;
}

}  // namespace

TEST_CASE("vanishing threshold recovers the probability of service") {
  const auto& an = table_analyzer();
  for (double d : {0.0, 20.0, 50.0}) {
    const auto r = an.coverage({1e-9, d});
    CHECK(r.p_cover == doctest::Approx(r.assoc.los + r.assoc.nlos).epsilon(1e-5));
    CHECK(r.p_cover_los == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.p_cover_nlos == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("overwhelming noise drives coverage to zero") {
  NetworkConfig cfg;
  cfg.noise = 1e9;
  CHECK(coverage({db_to_linear(-10.0), 20.0}, cfg).p_cover < 1e-6);
}

TEST_CASE("empty network never covers") {
  NetworkConfig cfg;
  cfg.lambda_tx = 0.0;
  const CoverageAnalyzer an(cfg);
  const auto r = an.coverage({10.0, 0.0});
  CHECK(r.p_cover == 0.0);
  CHECK(r.p_cover_los == 0.0);
  CHECK(r.p_cover_nlos == 0.0);
  CHECK(an.ergodic_rate(0.0) == 0.0);
}

TEST_CASE("coverage is nonincreasing in the threshold and the noise") {
  const auto& an = table_analyzer();
  for (double d : {0.0, 30.0}) {
    double prev = 1.0;
    for (double db = -10.0; db <= 30.0; db += 4.0) {
      const double p = an.coverage({db_to_linear(db), d}).p_cover;
      CHECK(p <= prev + 1e-9);
      prev = p;
    }
  }
  double prev = 1.0;
  for (double noise_db : {-60.0, -30.0, -10.0, 0.0, 10.0}) {
    NetworkConfig cfg;
    cfg.noise = db_to_linear(noise_db);
    const double p = coverage({db_to_linear(5.0), 20.0}, cfg).p_cover;
    CHECK(p <= prev + 1e-9);
    prev = p;
  }
}

TEST_CASE("total coverage decomposes over the serving tier") {
  const auto& an = table_analyzer();
  for (double d : {5.0, 25.0, 45.0})
    for (double db : {0.0, 10.0, 20.0}) {
      const auto r = an.coverage({db_to_linear(db), d});
      CHECK(r.p_cover == doctest::Approx(r.assoc.los * r.p_cover_los + r.assoc.nlos * r.p_cover_nlos).epsilon(1e-12));
      CHECK(r.p_cover_los == doctest::Approx(an.conditional_coverage(Tier::los, {db_to_linear(db), d})));
    }
}

TEST_CASE("bounds sandwich the coverage curve") {
  const auto& an = table_analyzer();
  for (double d : {0.0, 20.0, 40.0, 50.0})
    for (double db = -10.0; db <= 30.0; db += 8.0) {
      CAPTURE(d);
      CAPTURE(db);
      const double b = db_to_linear(db);
      const double lo = an.coverage({b, d, CoverageMode::lower_bound}).p_cover;
      const double ex = an.coverage({b, d}).p_cover;
      const double hi = an.coverage({b, d, CoverageMode::upper_bound}).p_cover;
      CHECK(lo <= ex + 1e-6);
      CHECK(ex <= hi + 1e-6);
    }
}

TEST_CASE("centred fast path joins the general path") {
  const auto& an = table_analyzer();
  for (double db : {0.0, 10.0, 20.0}) {
    const double a = an.coverage({db_to_linear(db), 0.0}).p_cover;
    const double b = an.coverage({db_to_linear(db), 50.0 * 1e-6}).p_cover;
    CHECK(std::abs(a - b) < 1e-4);
  }
}

TEST_CASE("grid evaluation matches pointwise evaluation") {
  const auto& an = table_analyzer();
  std::vector<CoverageQuery> qs;
  for (double d : {10.0, 30.0})
    for (double db : {0.0, 10.0}) qs.push_back({db_to_linear(db), d});
  const auto grid = an.coverage_grid(qs);
  for (std::size_t i = 0; i < qs.size(); ++i) CHECK(grid[i].p_cover == an.coverage(qs[i]).p_cover);
}

TEST_CASE("invalid queries are rejected") {
  const auto& an = table_analyzer();
  CHECK_THROWS_AS(an.coverage({0.0, 10.0}), DomainError);
  CHECK_THROWS_AS(an.coverage({1.0, 60.0}), DomainError);
  CHECK_THROWS_AS(an.coverage({1.0, -1.0}), DomainError);
  NetworkConfig cfg;
  cfg.mu = 0.0;
  CHECK_THROWS_AS(CoverageAnalyzer(cfg).conditional_coverage(Tier::nlos, {1.0, 10.0}), ZeroAssociation);
}

TEST_CASE("ergodic rate scales with the bandwidth") {
  NetworkConfig a;
  a.bandwidth = 1e6;
  NetworkConfig b = a;
  b.bandwidth = 3e6;
  const double ra = ergodic_rate(0.0, a);
  const double rb = ergodic_rate(0.0, b);
  CHECK(ra > 0.0);
  CHECK(rb == doctest::Approx(3.0 * ra).epsilon(1e-12));
}

TEST_CASE("ergodic rate agrees with a fixed-rule integral of the coverage curve") {
  const auto& an = table_analyzer();
  // trapezoid on a fine grid of the spectral efficiency
  double acc = 0.0;
  const double h = 0.125;
  double prev = 1.0;
  {
    const auto r = an.coverage({1e-12, 0.0});
    prev = r.p_cover;
  }
  for (double u = h; u <= 40.0; u += h) {
    const double p = an.coverage({std::exp2(u) - 1.0, 0.0}).p_cover;
    acc += 0.5 * h * (prev + p);
    prev = p;
  }
  CHECK(an.ergodic_rate(0.0) == doctest::Approx(NetworkConfig{}.bandwidth * acc).epsilon(1e-3));
}

TEST_CASE("blockage sweep starts from the all-LOS network") {
  const std::vector<double> mus = {0.0, 0.05, 0.1};
  const CoverageQuery q{db_to_linear(5.0), 20.0};
  const auto sweep = blockage_sweep(mus, q, NetworkConfig{});
  REQUIRE(sweep.curve.size() == 3);
  NetworkConfig los;
  los.mu = 0.0;
  const auto r = coverage(q, los);
  CHECK(r.assoc.nlos == 0.0);
  CHECK(r.p_cover == doctest::Approx(r.assoc.los * r.p_cover_los).epsilon(1e-12));
  CHECK(sweep.curve.front().value == doctest::Approx(r.p_cover).epsilon(1e-12));
  for (const auto& p : sweep.curve) CHECK(sweep.best.value >= p.value);
  CHECK_THROWS_AS(blockage_sweep({}, q, NetworkConfig{}), DomainError);
}
