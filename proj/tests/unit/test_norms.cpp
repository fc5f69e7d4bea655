#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "wavelab/norms.hpp"

using namespace wavelab;

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(sphere_area(5) == doctest::Approx(8.0 / 3.0 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("zero field has zero norm") {
  const RadialField u(Grid::from_extent(2.0, 20, 2.0, 20));
  CHECK(weighted_norm(u, {0.3, 1.0, 3.0}, Region::everything()) == 0.0);
}

TEST_CASE("box volume converges at second order") {
  // int_{0.5}^{1.5} int_{0.25}^{1.25} 4 pi r^2 dr dt, q = 2.
  const double exact = std::sqrt(4 * std::numbers::pi * (std::pow(1.25, 3) - std::pow(0.25, 3)) / 3.0);
  double prev = 0.0, order = 0.0;
  for (std::size_t cells : {16, 32, 64}) {
    const Grid g = Grid::from_extent(2.0, cells, 2.0, cells);
    const RadialField u(g, 1.0);
    const double e = std::abs(weighted_norm(u, {0.0, 0.0, 2.0}, Region::box(0.5, 1.5, 0.25, 1.25)) - exact);
    if (prev > 0.0) order = std::log2(prev / e);
    prev = e;
  }
  CHECK(prev <= 1e-3 * exact);
  CHECK(order >= 1.8);
}

TEST_CASE("smooth closed form converges at second order") {
  // u = exp(-t - r), q = 1, n = 3 on [0,2]^2: 4 pi (1 - e^-2) int_0^2 r^2 e^-r dr.
  const double radial = 2.0 - std::exp(-2.0) * (4.0 + 4.0 + 2.0);
  const double exact = 4 * std::numbers::pi * (1 - std::exp(-2.0)) * radial;
  double prev = 0.0, order = 0.0;
  for (std::size_t cells : {16, 32, 64}) {
    const Grid g = Grid::from_extent(2.0, cells, 2.0, cells);
    const auto u = RadialField::sample(g, [](double t, double r) { return std::exp(-t - r); });
    const double e = std::abs(weighted_norm(u, {0.0, 0.0, 1.0}, Region::everything()) - exact);
    if (prev > 0.0) order = std::log2(prev / e);
    prev = e;
  }
  CHECK(order >= 1.8);
}

TEST_CASE("monotone in the region and Hoelder consistent") {
  const Grid g = Grid::from_extent(4.0, 40, 4.0, 40);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u01(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u01(rng), b = u01(rng), c = u01(rng);
    auto fu = [=](double t, double r) { return t - r > 0 ? std::sin(a * t) * std::exp(-b * r) + 0.1 : 0.0; };
    auto fv = [=](double t, double r) { return t - r > 0 ? std::cos(c * r) * t : 0.0; };
    const auto u = RadialField::sample(g, fu), v = RadialField::sample(g, fv);
    RadialField uv(g);
    for (std::size_t k = 0; k < uv.values().size(); ++k) uv.values()[k] = u.values()[k] * v.values()[k];
    const double q = 1.0 + 3.0 * u01(rng) / 2.0, gamma = 0.3 * a;
    const double lhs = weighted_norm(uv, {0.0, 1.0, 1.0}, Region::everything());
    const double rhs = weighted_norm(u, {gamma, 1.0, q}, Region::everything()) *
                       weighted_norm(v, {-gamma, 1.0, q / (q - 1.0)}, Region::everything());
    CHECK(lhs <= rhs * (1 + 1e-12));

    Region small = Region::box(1.0, 2.0, 0.0, 1.0), large = Region::box(0.5, 3.0, 0.0, 2.0);
    CHECK(weighted_norm(u, {gamma, 1.0, q}, small) <= weighted_norm(u, {gamma, 1.0, q}, large));
  }
}

TEST_CASE("weight is at least one inside the cone") {
  for (double t = 1.0; t < 50.0; t += 0.37)
    for (double r = 0.0; t - r >= 1.0; r += 0.41)
      for (double R : {0.0, 1.0, 3.0}) CHECK((t + R) * (t + R) - r * r >= 1.0);
}

TEST_CASE("errors") {
  const Grid g = Grid::from_extent(2.0, 20, 2.0, 20);
  RadialField u(g, 1.0);
  CHECK_THROWS_AS(weighted_norm(u, {0.0, 0.0, 0.5}, Region::everything()), std::invalid_argument);
  CHECK_THROWS_AS(weighted_norm(u, {0.0, 0.0, 2.0}, Region::box(0.0, 3.0, 0.0, 1.0)), std::invalid_argument);
  // Nonzero outside the shifted cone with a nonzero weight exponent.
  CHECK_THROWS_AS(weighted_norm(u, {0.5, 0.0, 2.0}, Region::everything()), std::invalid_argument);
  CHECK_NOTHROW(weighted_norm(u, {0.0, 0.0, 2.0}, Region::everything()));
}

TEST_CASE("null coordinates") {
  CHECK(null_coords(1.0, 1.0).u == 2.0);
  CHECK(null_coords(1.0, 1.0).v == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u01(0.0, 100.0);
  for (int k = 0; k < 10000; ++k) {
    const double t = u01(rng), r = u01(rng) * t / 100.0;
    const auto p = null_coords(t, r);
    const auto [t2, r2] = from_null_coords(p.u, p.v);
    CHECK(std::abs(t2 - t) <= 1e-15 * std::max(1.0, t));
    CHECK(std::abs(r2 - r) <= 1e-15 * std::max(1.0, t));
  }
  CHECK_THROWS_AS(from_null_coords(0.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(from_null_coords(0.0, 1.0, false));
  // 0 <= eta <= v <= xi <= u  <=>  0 <= s - rho <= t - r and s + rho <= t + r.
  const auto out = null_coords(3.0, 1.0), in = null_coords(1.5, 0.5);
  CHECK(0.0 <= in.v);
  CHECK(in.v <= out.v);
  CHECK(in.u <= out.u);
}

TEST_CASE("dyadic layers") {
  const auto l2 = dyadic_layers(2.0, 1e9);
  REQUIRE(l2.size() == 3);
  CHECK(l2[0].layer_lo == 1.0);
  CHECK(l2[2].layer_hi == 8.0);
  CHECK(dyadic_layers(1000.0, 1e9).size() == 12);
  CHECK(dyadic_layers(1000.0, 1e9).back().layer_hi == 4000.0);
  // Clipped by the available cone depth.
  const auto clipped = dyadic_layers(16.0, 5.0);
  CHECK(clipped.back().layer_hi == 5.0);
  // Layers tile (1, top] without gaps.
  const auto l = dyadic_layers(37.0, 1e9);
  for (std::size_t k = 1; k < l.size(); ++k) CHECK(l[k].layer_lo == l[k - 1].layer_hi);
  CHECK(l.back().layer_hi == 4 * 37.0);
  CHECK_THROWS_AS(dyadic_layers(1.0, 10.0), std::invalid_argument);
}
