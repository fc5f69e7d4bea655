#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "wavelab/exponents.hpp"

using namespace wavelab;

TEST_CASE("critical power matches the known dimensions") {
  CHECK(critical_power(3) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(critical_power(3) - (1.0 + std::sqrt(2.0))) <= 1e-12);
  CHECK(std::abs(critical_power(4) - 2.0) <= 1e-12);
  CHECK(std::abs(critical_power(2) - (3.0 + std::sqrt(17.0)) / 2.0) <= 1e-12);
  CHECK_THROWS_AS(critical_power(1), std::invalid_argument);
}

TEST_CASE("critical power solves the quadratic and decreases in n") {
  double prev = 1e9;
  for (int n = 2; n <= 20; ++n) {
    const double p = critical_power(n);
    CHECK(p > 1.0);
    CHECK(std::abs(strauss_quadratic(n, p)) <= 1e-12 * (n + 1));
    CHECK(p < conformal_power(n).value());
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("conformal and Strichartz exponents are exact rationals") {
  CHECK(conformal_power(3) == Rational(3, 1));
  CHECK(strichartz_exponent(3) == Rational(4, 1));
  CHECK(strichartz_exponent(4) == Rational(10, 3));
  CHECK(conformal_power(5) == Rational(2, 1));
  const ExponentSet e = exponent_set(5);
  CHECK(e.q_strichartz == Rational(3, 1));
}

TEST_CASE("weight window endpoints") {
  const WeightWindow w = weight_window(3, 3.0);
  CHECK(w.lower == doctest::Approx(1.0 / 12.0));
  CHECK(w.upper == doctest::Approx(0.25));
  CHECK(w.nonempty());
  CHECK(w.contains(w.midpoint()));

  const WeightWindow crit = weight_window(3, critical_power(3));
  CHECK(crit.kind == WindowKind::degenerate);
  CHECK(crit.lower == doctest::Approx(crit.upper).epsilon(1e-12));

  // p = 2 is critical for n = 4: both endpoints sit at 1/6.
  const WeightWindow four = weight_window(4, 2.0);
  CHECK(four.lower == doctest::Approx(1.0 / 6.0));
  CHECK(four.upper == doctest::Approx(1.0 / 6.0));
  CHECK(four.kind == WindowKind::degenerate);
  CHECK_FALSE(four.nonempty());
  const WeightWindow below = weight_window(4, 1.9);
  CHECK(below.kind == WindowKind::empty);
  CHECK(below.lower > below.upper);

  CHECK_THROWS_AS(weight_window(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(weight_window(3, 0.5), std::invalid_argument);
}

TEST_CASE("window is nonempty exactly above the critical power") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> nd(2, 9);
  std::uniform_real_distribution<double> pd(1.0 + 1e-9, 6.0);
  for (int k = 0; k < 1000; ++k) {
    const int n = nd(rng);
    const double p = pd(rng);
    const WeightWindow w = weight_window(n, p);
    const double pc = critical_power(n);
    if (std::abs(p - pc) <= 1e-10) continue;
    CHECK(w.nonempty() == (p > pc));
    CHECK((w.lower < w.upper) == (p > pc));
  }
}

TEST_CASE("radial estimate parameters") {
  const RadialEstimateParams a = thm14_params(3, 4.0);
  CHECK(a.gamma == doctest::Approx(0.5));
  CHECK(a.sum == doctest::Approx(0.5));
  CHECK(a.beta_max == doctest::Approx(0.25));
  CHECK(a.alpha_plus_beta == 0.0);

  const RadialEstimateParams b = thm14_params(5, 3.0);
  CHECK(b.gamma == doctest::Approx(2.0 / 3.0));
  CHECK(b.sum == doctest::Approx(2.0 / 3.0));
  CHECK(b.beta_max == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(thm14_params(4, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(thm14_params(3, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(thm14_params(3, 4.5), std::invalid_argument);
}

TEST_CASE("alpha + beta >= 0 exactly when q <= 2(n+1)/(n-1)") {
  for (int n = 3; n <= 11; n += 2) {
    const double qmax = strichartz_exponent(n).value();
    for (int k = 1; k <= 50; ++k) {
      const double q = 2.0 + (qmax - 2.0) * k / 50.0;
      const RadialEstimateParams r = thm14_params(n, q);
      CHECK(r.alpha_plus_beta >= -1e-15);
      CHECK(r.gamma <= 2.0 / q + 1e-15);
    }
    // Beyond the endpoint gamma exceeds 2/q, computed directly.
    const double q_out = qmax * 1.01;
    CHECK((n - 1) * (0.5 - 1.0 / q_out) > 2.0 / q_out);
    CHECK(thm14_params(n, qmax).alpha_plus_beta == doctest::Approx(0.0).epsilon(1e-14));
  }
}
