#include <stdexcept>

#include "doctest.h"
#include "wavelab/overlap.hpp"

using namespace wavelab;

TEST_CASE("power iteration against the SVD") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto op = BandedBlockOperator::random(1, 6, 5, 2, seed);
    const double svd = Eigen::JacobiSVD<Eigen::MatrixXd>(op.matrix).singularValues()(0);
    const auto est = spectral_norm(op.matrix);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(svd).epsilon(1e-6));
    CHECK(est.value <= svd * (1 + 1e-12));
  }
  CHECK(spectral_norm(Eigen::MatrixXd::Zero(4, 4)).value == 0.0);
}

TEST_CASE("band structure") {
  const auto op = BandedBlockOperator::random(2, 4, 3, 2, 7);
  CHECK(op.block_count() == 16);
  CHECK(op.allowed(0, 5));   // (0,0) vs (1,1)
  CHECK_FALSE(op.allowed(0, 2));  // (0,0) vs (0,2)
  CHECK_NOTHROW(op.validate());
  auto broken = op;
  broken.matrix(0, broken.matrix.cols() - 1) = 1.0;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("block diagonal operator") {
  const auto op = BandedBlockOperator::block_diagonal(1, 8, 6, 3);
  const auto r = overlap_bound(op);
  CHECK(r.exact);
  CHECK(r.norm_bound == doctest::Approx(3.0 * r.sup_block_norm));
  CHECK(r.direct_norm == doctest::Approx(r.sup_block_norm).epsilon(1e-7));
  CHECK(r.holds);
}

TEST_CASE("random banded operators satisfy the bound") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r1 = overlap_bound(BandedBlockOperator::random(1, 64, 8, 2, seed, 0.3));
    CHECK(r1.holds);
    const auto r2 = overlap_bound(BandedBlockOperator::random(2, 8, 4, 2, seed, 0.3));
    CHECK(r2.holds);
  }
}

TEST_CASE("single block has slack exactly (2C+1)^d") {
  for (int d : {1, 2})
    for (std::size_t C : {1, 2, 3}) {
      const auto r = overlap_bound(BandedBlockOperator::random(d, 1, 12, C, 5));
      double factor = 1.0;
      for (int i = 0; i < d; ++i) factor *= 2.0 * static_cast<double>(C) + 1.0;
      CHECK(r.slack == factor);
    }
}

TEST_CASE("other exponent pairs give probe lower bounds") {
  const auto op = BandedBlockOperator::random(1, 8, 4, 2, 9);
  const auto r = overlap_bound(op, 1.5, 3.0, 128, 4);
  CHECK_FALSE(r.exact);
  CHECK(r.direct_norm > 0.0);
  CHECK(r.direct_norm <= probe_norm_lower_bound(op.matrix, 1.5, 3.0, 512, 4) * (1 + 1e-12));
  CHECK_THROWS_AS(overlap_bound(op, 3.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(overlap_bound(op, 0.5, 2.0), std::invalid_argument);
}
