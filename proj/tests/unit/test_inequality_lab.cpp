#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "wavelab/exponents.hpp"
#include "wavelab/inequality_lab.hpp"

using namespace wavelab;

namespace {

const KernelParams kAdmissible{-0.125, 0.125, 0.5, 4.0 / 3.0, 4.0};
const KernelParams kBoundary{-0.25, 0.25, 0.5, 4.0 / 3.0, 4.0};  // alpha + gamma = 1/q

GridFunction1D indicator(double L, std::size_t n, double b) {
  return GridFunction1D::sample(L, n, [b](double x) { return x < b ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("admissibility conditions") {
  CHECK(kAdmissible.admissible());
  CHECK(kAdmissible.alpha + kAdmissible.beta + kAdmissible.gamma == doctest::Approx(2.0 / kAdmissible.q));
  CHECK(kBoundary.violation() == "alpha + gamma <= 1/q");
  CHECK(KernelParams{-0.3, 0.2, 0.6, 4.0 / 3, 4}.violation() == "alpha + beta < 0");
  CHECK(KernelParams{0.0, 0.0, 0.4, 4.0 / 3, 4}.violation() == "alpha + beta + gamma != 1 - (1/p - 1/q)");
  CHECK_FALSE(KernelParams{0.0, 0.0, 0.5, 4, 2}.admissible());
  const auto d = KernelParams::dual(4.0, -0.125, 0.125, 0.5);
  CHECK(d.p == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("radial estimate parameters satisfy the dual identity") {
  for (int n : {3, 5, 7, 9})
    for (double q = 2.05; q <= strichartz_exponent(n).value() + 1e-12; q += 0.05) {
      const auto r = thm14_params(n, q);
      const auto k = KernelParams::from_radial(r, 0.5 * r.beta_max);
      CHECK(k.alpha + k.beta + k.gamma == doctest::Approx(2.0 / q).epsilon(1e-14));
      CHECK(std::abs(k.scaling_defect()) <= 1e-14);
      // alpha + beta >= 0 exactly when gamma <= 2/q exactly when q <= 2(n+1)/(n-1).
      CHECK((k.alpha + k.beta >= -1e-14) == (r.gamma <= 2.0 / q + 1e-14));
    }
}

TEST_CASE("zero input gives zero output") {
  const GridFunction1D g(8.0, 64);
  const auto f = frac_integral(g, kAdmissible);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("closed form for the unweighted half-power kernel") {
  const KernelParams k{0.0, 0.0, 0.5, 4.0 / 3, 4};
  const auto f = frac_integral(indicator(4.0, 128, 1.0), k);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double u = f.center(i);
    const double exact = u <= 1.0 ? 2 * std::sqrt(u) : 2 * (std::sqrt(u) - std::sqrt(u - 1));
    CHECK(f.values[i] == doctest::Approx(exact).epsilon(1e-10));
  }
  CHECK(frac_integral_at(indicator(4.0, 128, 1.0), k, 2.0) == doctest::Approx(2 * (std::sqrt(2.0) - 1)).epsilon(1e-10));
}

TEST_CASE("singular cell integral against the beta function") {
  // int_0^u (u-x)^{-1/2} x^{-1/4} dx = u^{1/4} B(3/4, 1/2).
  const double B = std::tgamma(0.75) * std::tgamma(0.5) / std::tgamma(1.25);
  CHECK(singular_cell_integral(0.0, 2.0, 2.0, 0.5, 0.25) == doctest::Approx(std::pow(2.0, 0.25) * B).epsilon(1e-13));
  const double split = singular_cell_integral(0.0, 0.7, 2.0, 0.5, 0.25) + singular_cell_integral(0.7, 1.9, 2.0, 0.5, 0.25) +
                       singular_cell_integral(1.9, 2.0, 2.0, 0.5, 0.25);
  CHECK(split == doctest::Approx(std::pow(2.0, 0.25) * B).epsilon(1e-13));
  CHECK_THROWS_AS(singular_cell_integral(0.5, 0.4, 1.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("refinement rate for a smooth input") {
  auto bump = [](double x) { return std::exp(-(x - 2) * (x - 2)); };
  const KernelParams k{0.0, 0.25, 0.5, 4.0 / 3, 4};
  double prev_diff = 0.0;
  for (std::size_t n : {64, 128, 256}) {
    const auto a = GridFunction1D::sample(4.0, n, bump), b = GridFunction1D::sample(4.0, 2 * n, bump);
    double diff = 0.0;
    for (double u = 0.25; u <= 4.0; u += 0.25) diff = std::max(diff, std::abs(frac_integral_at(a, k, u) - frac_integral_at(b, k, u)));
    // h^{1 - max(gamma, beta)} = h^{1/2}; the observed rate is at least that.
    if (prev_diff > 0.0) CHECK(diff <= prev_diff * std::pow(0.5, 0.5) * 1.05);
    prev_diff = diff;
  }
}

TEST_CASE("homogeneity and monotonicity") {
  FamilySpec fs;
  fs.seed = 4;
  const FracIntegralOperator op(16.0, 256, kAdmissible);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto g1 = family_member(fs, i, 16.0, 256);
    auto g2 = g1;
    for (double& v : g2.values) v = 3.0 * v + 0.5;
    const auto f1 = op.apply(g1), f2 = op.apply(g2);
    auto g3 = g1;
    for (double& v : g3.values) v *= 2.5;
    const auto f3 = op.apply(g3);
    for (std::size_t k = 0; k < f1.size(); ++k) {
      CHECK(f1.values[k] <= f2.values[k]);
      CHECK(f3.values[k] == doctest::Approx(2.5 * f1.values[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("frac_integral argument checks") {
  const GridFunction1D g(4.0, 16);
  CHECK_THROWS_AS(frac_integral(g, KernelParams{0.0, 0.0, 1.0, 2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(frac_integral(g, KernelParams{0.0, 1.0, 0.5, 2, 4}), std::invalid_argument);
  GridFunction1D bad = g;
  bad.h = 0.3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(frac_integral_at(g, kAdmissible, 5.0), std::invalid_argument);
}

TEST_CASE("families are reproducible and grid independent in shape") {
  FamilySpec fs;
  fs.seed = 99;
  const auto a = family_member(fs, 7, 16.0, 512), b = family_member(fs, 7, 16.0, 512);
  CHECK(a.values == b.values);
  const auto c = family_member(fs, 7, 32.0, 1024);
  for (std::size_t i = 0; i < 512; ++i) CHECK(c.values[i] == a.values[i]);
  CHECK(family_kind_from_string("bump") == FamilyKind::bump);
  CHECK_THROWS_AS(family_kind_from_string("x"), std::invalid_argument);
}

TEST_CASE("admissible ratio is stable as the domain doubles") {
  FamilySpec fs;
  fs.count = 200;
  fs.seed = 7;
  double sup[2];
  int k = 0;
  for (double L : {16.0, 32.0}) {
    std::vector<GridFunction1D> fam;
    for (std::size_t i = 0; i < fs.count; ++i) fam.push_back(family_member(fs, i, L, static_cast<std::size_t>(L * 32)));
    fam.emplace_back(L, static_cast<std::size_t>(L * 32));  // g = 0 is excluded from the sup
    const auto r = ratio_1d(fam, kAdmissible);
    CHECK(r.admissible);
    CHECK(r.undefined == 1);
    sup[k++] = r.sup_ratio;
  }
  CHECK(std::abs(sup[1] / sup[0] - 1.0) < 0.05);
}

TEST_CASE("boundary-violating ratio grows with the domain") {
  double prev = 0.0;
  for (double L : {16.0, 32.0, 64.0, 128.0}) {
    const auto n = static_cast<std::size_t>(L * 32);
    std::vector<GridFunction1D> fam;
    for (double d : {0.5, 0.25, 0.125}) fam.push_back(adversarial_member(L, n, kBoundary.p, d, 1.0 / 32));
    const auto r = ratio_1d(fam, kBoundary);
    CHECK_FALSE(r.admissible);
    CHECK(r.sup_ratio > prev);
    prev = r.sup_ratio;
  }
}

TEST_CASE("Hardy-Littlewood ratio") {
  double prev = 0.0;
  for (std::size_t n : {256, 512, 1024}) {
    const auto g = GridFunction1D::sample(8.0, n, [](double x) { return std::exp(-4 * (x - 4) * (x - 4)); });
    const auto r = hardy_littlewood_check(g, 0.5, 4.0 / 3, 4);
    if (prev > 0.0) CHECK(std::abs(r.ratio / prev - 1) < 0.05);
    prev = r.ratio;
    CHECK(r.tail_fraction < 0.01);
  }
  auto shifted = [](double c) {
    return GridFunction1D::sample(16.0, 512, [c](double x) { return std::abs(x - c) < 1 ? std::exp(1 - 1 / (1 - (x - c) * (x - c))) : 0.0; });
  };
  CHECK(hardy_littlewood_check(shifted(5.0), 0.5, 4.0 / 3, 4).ratio ==
        doctest::Approx(hardy_littlewood_check(shifted(9.0), 0.5, 4.0 / 3, 4).ratio).epsilon(1e-10));
  CHECK(std::isnan(hardy_littlewood_check(GridFunction1D(4.0, 16), 0.5, 4.0 / 3, 4).ratio));
  CHECK_THROWS_AS(hardy_littlewood_check(shifted(5.0), 1.0, 4.0 / 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(hardy_littlewood_check(shifted(5.0), 0.0, 4.0 / 3, 4), std::invalid_argument);
}

TEST_CASE("splitting steps") {
  double c_prev = 0.0;
  for (std::size_t n : {128, 256, 512}) {
    const auto s = splitting_check(indicator(16.0, n, 1.0), kAdmissible);
    CHECK(s.split_holds);
    CHECK(s.c_split_fitted <= 4.0);
    CHECK(s.self_similar_applicable);
    CHECK(s.norm_bound_holds);
    if (c_prev > 0.0) CHECK(std::abs(s.c_split_fitted / c_prev - 1) < 0.1);
    c_prev = s.c_split_fitted;
  }
  const auto z = splitting_check(GridFunction1D(4.0, 32), kAdmissible);
  CHECK(z.c_split_fitted == 0.0);
  CHECK(z.norm_f1 == 0.0);
  auto neg = indicator(4.0, 32, 1.0);
  neg.values[3] = -1.0;
  neg.nonnegative = false;
  CHECK_THROWS_AS(splitting_check(neg, kAdmissible), std::invalid_argument);
}

TEST_CASE("2D kernel domination") {
  // With gamma = 0 both sides carry the same weights.
  const auto eq = domination_sides(4.0, 2.0, 3.0, 1.0, KernelParams{-0.125, 0.125, 0.0, 4.0 / 3, 4});
  CHECK(eq.log_lhs == doctest::Approx(eq.log_rhs));
  const auto ok = kernel_domination_2d(1000000, kAdmissible, 42);
  CHECK(ok.violations == 0);
  CHECK(ok.samples == 1000000);
  KernelParams neg = kAdmissible;
  neg.gamma = -0.5;
  CHECK(kernel_domination_2d(100000, neg, 42).violations > 0);
  // Random admissible draws stay violation free.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const KernelParams p{u01(rng) - 0.5, u01(rng) - 0.5, 0.99 * u01(rng), 4.0 / 3, 4};
    CHECK(kernel_domination_2d(20000, p, static_cast<std::uint64_t>(k)).violations == 0);
  }
}

TEST_CASE("tensor estimate") {
  auto bumpG = [](double x, double y) { double r2 = (x - 2) * (x - 2) + (y - 1) * (y - 1); return r2 < 1 ? std::exp(1 - 1 / (1 - r2)) : 0.0; };
  auto bumpH = [](double x, double y) { double r2 = (x - 3) * (x - 3) + (y - 1.5) * (y - 1.5); return r2 < 1.5 ? std::exp(1 - 1.5 / (1.5 - r2)) : 0.0; };
  double prev = 0.0;
  for (std::size_t n : {16, 32, 64}) {
    const auto r = tensor_estimate_2d(GridFunction2D::sample(4, n, bumpG), GridFunction2D::sample(4, n, bumpH), kAdmissible);
    if (prev > 0.0) CHECK(std::abs(r.ratio / prev - 1) < 0.1);
    prev = r.ratio;
  }
  CHECK(tensor_estimate_2d(GridFunction2D(4, 16), GridFunction2D::sample(4, 16, bumpH), kAdmissible).integral == 0.0);

  const std::size_t n = 24;
  const auto a = GridFunction1D::sample(4, n, [](double x) { return std::exp(-x); });
  const auto b = GridFunction1D::sample(4, n, [](double x) { return 1 + x; });
  const auto c = GridFunction1D::sample(4, n, [](double x) { return x * x; });
  const auto e = GridFunction1D::sample(4, n, [](double x) { return std::sin(x) + 2; });
  GridFunction2D G(4, n), H(4, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      G(i, j) = a.values[i] * b.values[j];
      H(i, j) = c.values[i] * e.values[j];
    }
  const double quad = tensor_dominating_2d(G, H, kAdmissible);
  CHECK(quad == doctest::Approx(dominating_pair_1d(a, c, kAdmissible) * dominating_pair_1d(b, e, kAdmissible)).epsilon(1e-13));
  // The ordered quadruple integral sits below its dominating bound.
  CHECK(tensor_estimate_2d(G, H, kAdmissible).integral <= quad);
}
