#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace wavelab {

// Operator on (blocks_per_dim^d) x block_size unknowns whose block (j, k)
// vanishes unless max_i |j_i - k_i| < band.
struct BandedBlockOperator {
  int d = 1;
  std::size_t blocks_per_dim = 1;
  std::size_t block_size = 1;
  std::size_t band = 1;
  Eigen::MatrixXd matrix;

  [[nodiscard]] std::size_t block_count() const;
  [[nodiscard]] bool allowed(std::size_t j, std::size_t k) const;  // linear block indices
  [[nodiscard]] Eigen::MatrixXd block(std::size_t j, std::size_t k) const;
  // Throws std::invalid_argument if a block outside the band is nonzero.
  void validate() const;

  // Gaussian entries in every allowed block; each allowed block is dropped
  // with probability `sparsity`.
  static BandedBlockOperator random(int d, std::size_t blocks_per_dim, std::size_t block_size, std::size_t band,
                                    std::uint64_t seed, double sparsity = 0.0);
  // Only j == k blocks, Gaussian.
  static BandedBlockOperator block_diagonal(int d, std::size_t blocks_per_dim, std::size_t block_size,
                                            std::uint64_t seed);
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest singular value by power iteration on A^T A from a fixed start
// vector; stops when successive estimates agree to `tol` relative.
NormEstimate spectral_norm(const Eigen::MatrixXd& A, double tol = 1e-8, int max_iter = 100000);

// max ||A x||_q / ||x||_p over unit vectors and seeded Gaussian probes.
double probe_norm_lower_bound(const Eigen::MatrixXd& A, double p, double q, std::size_t probes, std::uint64_t seed);

struct OverlapReport {
  double sup_block_norm = 0.0;
  double norm_bound = 0.0;  // (2C+1)^d sup ||T_jk||
  double direct_norm = 0.0;
  double slack = 0.0;       // norm_bound / direct_norm
  bool holds = false;
  bool exact = false;       // false when both norms are probe lower bounds (p, q) != (2, 2)
};

// Throws std::invalid_argument for p > q or p, q < 1.
OverlapReport overlap_bound(const BandedBlockOperator& op, double p = 2.0, double q = 2.0, std::size_t probes = 256,
                            std::uint64_t seed = 1);

}  // namespace wavelab
