#include "wavelab/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wavelab {
namespace {

std::vector<std::size_t> unravel(std::size_t lin, int d, std::size_t nb) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  for (int i = d - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = lin % nb;
    lin /= nb;
  }
  return idx;
}

double lp(const Eigen::VectorXd& x, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

void check_shape(int d, std::size_t nb, std::size_t bs, std::size_t band) {
  if (d < 1 || d > 3 || nb == 0 || bs == 0 || band == 0)
    throw std::invalid_argument("BandedBlockOperator: need 1 <= d <= 3 and positive sizes");
}

}  // namespace

std::size_t BandedBlockOperator::block_count() const {
  std::size_t c = 1;
  for (int i = 0; i < d; ++i) c *= blocks_per_dim;
  return c;
}

bool BandedBlockOperator::allowed(std::size_t j, std::size_t k) const {
  const auto a = unravel(j, d, blocks_per_dim), b = unravel(k, d, blocks_per_dim);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t gap = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    if (gap >= band) return false;
  }
  return true;
}

Eigen::MatrixXd BandedBlockOperator::block(std::size_t j, std::size_t k) const {
  const auto bs = static_cast<Eigen::Index>(block_size);
  return matrix.block(static_cast<Eigen::Index>(j) * bs, static_cast<Eigen::Index>(k) * bs, bs, bs);
}

void BandedBlockOperator::validate() const {
  check_shape(d, blocks_per_dim, block_size, band);
  const auto n = static_cast<Eigen::Index>(block_count() * block_size);
  if (matrix.rows() != n || matrix.cols() != n) throw std::invalid_argument("BandedBlockOperator: matrix shape");
  for (std::size_t j = 0; j < block_count(); ++j)
    for (std::size_t k = 0; k < block_count(); ++k)
      if (!allowed(j, k) && block(j, k).cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("BandedBlockOperator: nonzero block outside the band");
}

BandedBlockOperator BandedBlockOperator::random(int d, std::size_t nb, std::size_t bs, std::size_t band,
                                                std::uint64_t seed, double sparsity) {
  check_shape(d, nb, bs, band);
  BandedBlockOperator op{d, nb, bs, band, {}};
  const std::size_t m = op.block_count();
  const auto n = static_cast<Eigen::Index>(m * bs);
  op.matrix = Eigen::MatrixXd::Zero(n, n);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto b = static_cast<Eigen::Index>(bs);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      if (!op.allowed(j, k)) continue;
      if (sparsity > 0.0 && u01(rng) < sparsity) continue;
      for (Eigen::Index r = 0; r < b; ++r)
        for (Eigen::Index c = 0; c < b; ++c)
          op.matrix(static_cast<Eigen::Index>(j) * b + r, static_cast<Eigen::Index>(k) * b + c) = nd(rng);
    }
  return op;
}

BandedBlockOperator BandedBlockOperator::block_diagonal(int d, std::size_t nb, std::size_t bs, std::uint64_t seed) {
  return random(d, nb, bs, 1, seed);
}

NormEstimate spectral_norm(const Eigen::MatrixXd& A, double tol, int max_iter) {
  NormEstimate est;
  if (A.size() == 0) return est;
  Eigen::VectorXd x(A.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 1.0 + 0.25 * std::sin(static_cast<double>(i) + 1.0);
  x.normalize();
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = A.transpose() * (A * x);
    const double lam = y.norm();
    est.iterations = it;
    if (lam == 0.0) {
      est.value = 0.0;
      est.converged = true;
      return est;
    }
    x = y / lam;
    est.value = std::sqrt(lam);
    if (it > 1 && std::abs(est.value - prev) <= tol * est.value) {
      est.converged = true;
      break;
    }
    prev = est.value;
  }
  return est;
}

double probe_norm_lower_bound(const Eigen::MatrixXd& A, double p, double q, std::size_t probes, std::uint64_t seed) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < A.cols(); ++c) best = std::max(best, lp(A.col(c), q));
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(A.cols());
  for (std::size_t k = 0; k < probes; ++k) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = nd(rng);
    const double nx = lp(x, p);
    if (nx > 0.0) best = std::max(best, lp(A * x, q) / nx);
  }
  return best;
}

OverlapReport overlap_bound(const BandedBlockOperator& op, double p, double q, std::size_t probes, std::uint64_t seed) {
  if (!(p >= 1.0 && q >= 1.0)) throw std::invalid_argument("overlap_bound: requires p, q >= 1");
  if (p > q) throw std::invalid_argument("overlap_bound: requires p <= q");
  op.validate();
  OverlapReport rep;
  rep.exact = p == 2.0 && q == 2.0;
  auto norm = [&](const Eigen::MatrixXd& A) {
    return rep.exact ? spectral_norm(A).value : probe_norm_lower_bound(A, p, q, probes, seed);
  };
  const std::size_t m = op.block_count();
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      if (op.allowed(j, k)) rep.sup_block_norm = std::max(rep.sup_block_norm, norm(op.block(j, k)));
  const double factor = std::pow(2.0 * static_cast<double>(op.band) + 1.0, op.d);
  rep.norm_bound = factor * rep.sup_block_norm;
  rep.direct_norm = norm(op.matrix);
  // factor * (sup / direct) keeps the single-block slack an exact integer.
  rep.slack = rep.direct_norm > 0.0 ? factor * (rep.sup_block_norm / rep.direct_norm) : 0.0;
  rep.holds = rep.direct_norm <= rep.norm_bound;
  return rep;
}

}  // namespace wavelab
