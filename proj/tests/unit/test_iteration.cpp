#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wavelab/exponents.hpp"
#include "wavelab/iteration.hpp"

using namespace wavelab;

namespace {

CauchyProblem small_problem(double eps, double p = 2.5) {
  CauchyProblem pb;
  pb.eps = eps;
  pb.nonlinearity = Nonlinearity::absolute(p);
  const auto w = weight_window(3, p);
  pb.gamma = w.nonempty() ? w.midpoint() : 0.0;
  pb.t_max = 6.0;
  pb.cells_per_unit = 8;
  return pb;
}

}  // namespace

TEST_CASE("nonlinearity bounds") {
  for (double p : {1.5, 2.0, 2.5, 3.7}) {
    const auto a = Nonlinearity::absolute(p), s = Nonlinearity::signed_power(p);
    CHECK(a.c0 == 1.0);
    CHECK(a.c1 == doctest::Approx(p));
    CHECK(a.bound_violations(10000, 3) == 0);
    CHECK(s.bound_violations(10000, 4) == 0);
    CHECK(a(-2.0) == doctest::Approx(std::pow(2.0, p)));
    CHECK(s(-2.0) == doctest::Approx(-std::pow(2.0, p)));
    CHECK(a.derivative(-2.0) == doctest::Approx(-p * std::pow(2.0, p - 1)));
  }
  CHECK(nonlinearity_kind_from_string(to_string(NonlinearityKind::signed_power)) == NonlinearityKind::signed_power);
  CHECK_THROWS_AS(nonlinearity_kind_from_string("cubic"), std::invalid_argument);
}

TEST_CASE("problem validation") {
  auto pb = small_problem(0.1);
  CHECK_NOTHROW(pb.validate());
  pb.gamma = 0.9;
  CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
  CHECK_NOTHROW(pb.validate(false));
  pb = small_problem(0.1);
  pb.f = profiles::bump(1.5);
  CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
  pb = small_problem(0.1);
  pb.eps = -1.0;
  CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
  CHECK(small_problem(0.1).refined(2).cells_per_unit == 16);
}

TEST_CASE("zero amplitude converges at step zero") {
  const auto r = picard_iterate(small_problem(0.0));
  CHECK(r.trace.status == IterationStatus::converged);
  CHECK(r.trace.steps == 0);
  CHECK(r.trace.A.at(0) == 0.0);
  CHECK(r.trace.B.at(0) == 0.0);
  CHECK(r.u.max_abs() == 0.0);
}

TEST_CASE("zero nonlinearity collapses the recursion") {
  auto pb = small_problem(0.5);
  pb.nonlinearity = Nonlinearity::zero(2.5);
  const auto r = picard_iterate(pb);
  CHECK(r.trace.status == IterationStatus::converged);
  REQUIRE(r.trace.B.size() >= 2);
  CHECK(r.trace.B[1] == 0.0);
  CHECK(r.trace.A[1] == r.trace.A[0]);
}

TEST_CASE("contracting run") {
  IterationOptions opts;
  opts.keep_iterates = true;
  const auto r = picard_iterate(small_problem(0.5), opts);
  const auto& tr = r.trace;
  CHECK(tr.status == IterationStatus::converged);
  CHECK(tr.lemma_bounds);
  CHECK(contracts(tr));
  CHECK(tr.support_leak <= 1e-12);
  for (std::size_t m = 1; m < tr.A.size(); ++m) CHECK(tr.B[m] >= std::abs(tr.A[m] - tr.A[m - 1]) * (1 - 1e-12));
  // Nonlinearity differences shrink geometrically along the trace.
  for (std::size_t m = 1; m < tr.fp_diff.size(); ++m)
    if (tr.fp_diff[m - 1] > 1e-14) CHECK(tr.fp_diff[m] <= 0.5 * tr.fp_diff[m - 1]);
  // Tail bound ||u_M - u_{M+k}|| <= 2^{1-M} B_0.
  const auto pb = small_problem(0.5);
  const std::size_t last = r.iterates.size() - 1;
  for (std::size_t M = 1; M < last; ++M)
    CHECK(iteration_norm(r.iterates[M] - r.iterates[last], pb) <= 1.2 * std::ldexp(tr.B[0], 1 - static_cast<int>(M)));
}

TEST_CASE("free part scales linearly with amplitude") {
  IterationOptions opts;
  opts.max_steps = 0;
  const double a = picard_iterate(small_problem(0.3), opts).trace.A[0];
  const double b = picard_iterate(small_problem(0.6), opts).trace.A[0];
  CHECK(std::abs(b / a - 2.0) <= 1e-10);
}

TEST_CASE("contraction constant is amplitude independent") {
  const auto t1 = picard_iterate(small_problem(0.25)).trace;
  const auto t2 = picard_iterate(small_problem(0.5)).trace;
  const auto fit = contraction_constant_check(t1, t2, 2.5);
  CHECK(fit.consistent);
  CHECK(fit.ratio >= 0.8);
  CHECK(fit.ratio <= 1.25);
  CHECK(fit.a0_ratio == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(contraction_constant_check(t1, t2, 1.0), std::invalid_argument);
}

TEST_CASE("large amplitude leaves the contraction regime") {
  const auto r = picard_iterate(small_problem(8.0));
  CHECK_FALSE(contracts(r.trace));
}

TEST_CASE("threshold search") {
  const auto flat = epsilon_threshold_search(small_problem(0.1), 0.05, 0.1, 0.1);
  CHECK(flat.monotone_regime);
  CHECK(flat.estimate == 0.1);
  const auto th = epsilon_threshold_search(small_problem(0.1), 0.5, 8.0, 0.05);
  CHECK_FALSE(th.monotone_regime);
  CHECK(th.lo < th.hi);
  CHECK(th.hi - th.lo <= 0.05 * 8.0);
  CHECK_THROWS_AS(epsilon_threshold_search(small_problem(0.1), 1.0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("fixed-point residual decreases under refinement") {
  auto pb = small_problem(0.5);
  const auto st = refinement_study(pb, 3);
  CHECK_FALSE(st.resolution_failure);
  CHECK(st.order >= 1.0);
}

TEST_CASE("blowup indicator") {
  auto pb = small_problem(0.0, 1.5);
  pb.t_max = 50.0;
  pb.cells_per_unit = 4;
  CHECK_FALSE(blowup_indicator(pb).growth_flag);
  pb.eps = 0.1;
  const auto grow = blowup_indicator(pb);
  CHECK(grow.growth_flag);
  for (std::size_t k = 1; k < grow.norms.size(); ++k) CHECK(grow.norms[k] >= grow.norms[k - 1]);
  pb.nonlinearity = Nonlinearity::absolute(2.5);
  CHECK_THROWS_AS(blowup_indicator(pb), std::invalid_argument);
  CHECK_FALSE(blowup_indicator(pb, {}, true).growth_flag);
}

TEST_CASE("John ratio") {
  const Grid g = Grid::from_extent(10.0, 40, 10.0, 40);
  const RadialField zero(g);
  const auto undefined = john_pointwise_check(zero, zero, 2.6);
  CHECK_FALSE(undefined.defined);
  CHECK(std::isnan(undefined.ratio));
  CHECK_THROWS_AS(john_pointwise_check(zero, zero, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(john_pointwise_check(zero, zero, 3.5), std::invalid_argument);
  const RadialField one(g, 1.0);
  CHECK_THROWS_AS(john_pointwise_check(zero, one, 2.6), std::invalid_argument);

  // Deeper forcing support tends to lower the ratio; reported only.
  for (double d0 : {2.0, 3.0, 4.0}) {
    const auto box = SupportBox{d0 + 1.0, d0 + 3.0, d0, d0 + 1.0};
    const auto Ff = RadialField::sample(g, [&](double s, double r) { return cone_bump(box)(s, r); });
    const auto w = duhamel_radial(RadialForcing::from_field(Ff), 3, g);
    const auto jr = john_pointwise_check(w, Ff, 2.6);
    CHECK(jr.defined);
    MESSAGE("support offset " << d0 << ": ratio " << jr.ratio);
  }
}
