#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "sentreg/special.hpp"

using namespace sentreg::special;

// Boost.Math is the reference implementation here; it is not linked into the
// library itself.

TEST_CASE("incomplete gamma agrees with the reference within 1e-10") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a_dist(0.05, 1200.0), ratio(0.0, 3.0);
  for (int i = 0; i < 3000; ++i) {
    const double a = i < 20 ? 0.5 * (i + 1) : a_dist(rng);
    const double x = a * ratio(rng);
    const double q = gamma_q(a, x), p = gamma_p(a, x);
    INFO("a=" << a << " x=" << x);
    CHECK(std::fabs(q - boost::math::gamma_q(a, x)) < 1e-10);
    CHECK(std::fabs(p - boost::math::gamma_p(a, x)) < 1e-10);
    CHECK(std::fabs(p + q - 1.0) < 1e-12);
  }
}

TEST_CASE("chi-square upper tail") {
  CHECK(chi2_upper_tail(0.0, 18) == 1.0);
  CHECK(std::fabs(chi2_upper_tail(2.0, 2) - std::exp(-1.0)) < 1e-14);
  CHECK(std::fabs(chi2_upper_tail(3.841458820694124, 1) - 0.05) < 1e-12);
  for (double df : {1.0, 2.0, 5.0, 18.0, 100.0, 1949.0}) {
    for (double q : {0.001, 0.1, 0.5, 0.9, 0.999}) {
      const boost::math::chi_squared dist(df);
      const double x = boost::math::quantile(dist, q);
      CHECK(std::fabs(chi2_upper_tail(x, df) - (1.0 - q)) < 1e-10);
    }
  }
  // Deep tail keeps relative precision.
  const double tiny = chi2_upper_tail(400.0, 18);
  CHECK(tiny > 0.0);
  CHECK(std::fabs(tiny / boost::math::cdf(boost::math::complement(boost::math::chi_squared(18), 400.0)) - 1) < 1e-8);
}

TEST_CASE("normal distribution helpers") {
  const boost::math::normal n01;
  for (double z : {-8.0, -3.0, -1.96, -0.5, 0.0, 0.7, 2.5, 6.0}) {
    CHECK(std::fabs(normal_cdf(z) - boost::math::cdf(n01, z)) < 1e-15);
    CHECK(std::fabs(normal_two_sided_p(z) - 2 * boost::math::cdf(boost::math::complement(n01, std::fabs(z)))) < 1e-15);
  }
  CHECK(normal_two_sided_p(0.0) == 1.0);
}

TEST_CASE("normal quantile accuracy over (0,1)") {
  const boost::math::normal n01;
  CHECK(normal_quantile(0.5) == 0.0);
  double worst = 0;
  for (int i = 1; i < 100000; ++i) {
    const double p = i / 100000.0;
    worst = std::max(worst, std::fabs(normal_quantile(p) - boost::math::quantile(n01, p)));
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 0.02425, 0.97575, 1 - 1e-10}) {
    const double ref = boost::math::quantile(n01, p);
    worst = std::max(worst, std::fabs(normal_quantile(p) - ref) / std::max(1.0, std::fabs(ref)));
  }
  CHECK(worst < 1.2e-9);
  for (int i = 1; i < 1000; ++i) CHECK(normal_quantile(i / 1000.0) == doctest::Approx(-normal_quantile(1 - i / 1000.0)));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), std::domain_error);
}
