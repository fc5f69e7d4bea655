#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wavelab/exponents.hpp"

namespace wavelab {

// Exponents of the weighted fractional integral
//   f(u) = u^{-alpha} int_0^u g(xi) |u - xi|^{-gamma} xi^{-beta} dxi.
struct KernelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double p = 2.0;
  double q = 2.0;

  // alpha + beta + gamma - (1 - (1/p - 1/q)); zero for scale-invariant params.
  [[nodiscard]] double scaling_defect() const;
  // Empty when admissible, otherwise the first failing condition.
  [[nodiscard]] std::string violation(double tol = 1e-12) const;
  [[nodiscard]] bool admissible(double tol = 1e-12) const { return violation(tol).empty(); }

  // Dual pair p = q/(q-1).
  static KernelParams dual(double q, double alpha, double beta, double gamma);
  // Dual exponents from the radial estimate with the given beta; alpha fills the sum.
  static KernelParams from_radial(const RadialEstimateParams& r, double beta);
};

// Piecewise-constant function on [0, L]: values[i] lives on [i h, (i+1) h].
struct GridFunction1D {
  double L = 1.0;
  double h = 1.0;
  std::vector<double> values;
  bool nonnegative = true;

  GridFunction1D() = default;
  GridFunction1D(double length, std::size_t cells);

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h; }
  [[nodiscard]] double lp_norm(double p) const;
  // Throws std::invalid_argument when size() * h != L or the sign flag lies.
  void validate() const;
  void refresh_sign();

  // Point samples at cell centers.
  static GridFunction1D sample(double length, std::size_t cells, const std::function<double(double)>& fn);
  // Exact cell averages of c * xi^{-a} on (0, b], zero beyond b (a < 1).
  static GridFunction1D power_law(double length, std::size_t cells, double a, double b, double c = 1.0);
};

// Matrix form of frac_integral on a fixed grid, evaluated at cell centers.
// Cells within kExactCells of xi = 0 or xi = u are integrated exactly
// (incomplete beta); the rest use 4-point Gauss-Legendre.
class FracIntegralOperator {
 public:
  static constexpr int kExactCells = 4;

  // Throws std::invalid_argument for gamma >= 1 or beta >= 1.
  FracIntegralOperator(double length, std::size_t cells, const KernelParams& params);

  [[nodiscard]] GridFunction1D apply(const GridFunction1D& g) const;
  [[nodiscard]] std::size_t cells() const { return n_; }

 private:
  double L_;
  std::size_t n_;
  KernelParams params_;
  std::vector<double> packed_;  // row i holds columns 0..i
};

GridFunction1D frac_integral(const GridFunction1D& g, const KernelParams& params);
// f at an arbitrary point u in (0, L].
double frac_integral_at(const GridFunction1D& g, const KernelParams& params, double u);

// int_a^b (u - xi)^{-gamma} xi^{-beta} dxi for 0 <= a <= b <= u, exactly.
double singular_cell_integral(double a, double b, double u, double gamma, double beta);

// Seeded test families on [0, L].
enum class FamilyKind { bump, power_law, mixed };
std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& s);

struct FamilySpec {
  FamilyKind kind = FamilyKind::mixed;
  std::size_t count = 200;
  std::uint64_t seed = 1;
  double support = 4.0;  // members live in [0, support]
};

// Member i depends only on (seed, i) and the grid, never on L beyond the grid.
GridFunction1D family_member(const FamilySpec& spec, std::size_t index, double length, std::size_t cells);

// xi^{-1/p} / log(1/xi) on [floor, delta], cell averaged; delta < 1.
GridFunction1D adversarial_member(double length, std::size_t cells, double p, double delta, double floor);

struct RatioReport {
  double sup_ratio = 0.0;
  std::size_t argmax = 0;
  std::vector<double> ratios;  // NaN where g == 0
  std::size_t undefined = 0;
  bool admissible = false;
  std::string violation;
};

// sup ||f||_{L^q[0,L]} / ||g||_{L^p[0,L]} over the family; all members must
// share the grid.
RatioReport ratio_1d(const std::vector<GridFunction1D>& family, const KernelParams& params);

// f2(u) = int g(xi) |u - xi|^{-s} dxi on the whole line.
struct HardyLittlewoodReport {
  double ratio = 0.0;  // NaN when g == 0
  double norm_f = 0.0;
  double norm_g = 0.0;
  double tail_fraction = 0.0;  // share of ||f2||_q^q from the analytic far field
};

// Throws std::invalid_argument for s outside (0, 1) or p >= q.
HardyLittlewoodReport hardy_littlewood_check(const GridFunction1D& g, double s, double p, double q);

// f2 at the cell centers of g's grid, exact cell integrals.
std::vector<double> riesz_potential(const GridFunction1D& g, double s);

struct SplittingReport {
  double c_split_fitted = 0.0;   // max f / (f1 + f2)
  double c_split_derived = 0.0;  // max(2^{max(gamma,0)}, 2^{max(beta,0)})
  bool split_holds = false;      // fitted <= derived (up to 1e-12 relative)
  double c_self_fitted = 0.0;    // max (f1(u) - 2^{-(alpha+gamma)} f1(u/2))_+ / f2(u)
  double norm_f1 = 0.0;
  double norm_f2 = 0.0;
  double norm_bound = 0.0;       // (1 - 2^{1/q-(alpha+gamma)})^{-1} c_self_fitted ||f2||_q
  bool norm_bound_holds = false;  // norm_f1 <= 1.1 norm_bound
  bool self_similar_applicable = false;  // alpha + gamma > 1/q
};

// Throws std::invalid_argument for negative g or alpha + beta < 0.
SplittingReport splitting_check(const GridFunction1D& g, const KernelParams& params);

struct DominationReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t degenerate = 0;
  double worst_log_excess = 0.0;  // max log(lhs) - log(rhs) over non-degenerate samples
};

struct DominationSides {
  double log_lhs = 0.0;
  double log_rhs = 0.0;
};

// log of both kernels at 0 <= eta <= v <= xi <= u (unchecked ordering).
DominationSides domination_sides(double u, double v, double xi, double eta, const KernelParams& params);

// Samples ordered quadruples in [0, 1]^4; chunks of 4096 samples share one
// seeded engine, so results do not depend on the thread count.
DominationReport kernel_domination_2d(std::size_t sample_count, const KernelParams& params, std::uint64_t seed);

// Piecewise-constant function on [0, L]^2, row-major values[i * n + j] for (x_i, y_j).
struct GridFunction2D {
  double L = 1.0;
  std::size_t n = 0;
  std::vector<double> values;

  GridFunction2D() = default;
  GridFunction2D(double length, std::size_t cells) : L(length), n(cells), values(cells * cells, 0.0) {}
  [[nodiscard]] double h() const { return L / static_cast<double>(n); }
  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  [[nodiscard]] double lp_norm(double p) const;

  static GridFunction2D sample(double length, std::size_t cells, const std::function<double(double, double)>& fn);
};

struct TensorReport {
  double integral = 0.0;
  double ratio = 0.0;  // integral / (||G||_{q'} ||H||_{q'}); 0 when G or H vanishes
};

// Quadruple integral of G(xi, eta) H(u, v) over 0 <= eta <= v <= xi <= u with
// kernel |u-v|^{-gamma} |xi-eta|^{-gamma} |xi eta|^{-beta} |u v|^{-alpha}.
// Singular factors are replaced by exact cell averages; cells sharing an
// index carry the ordered fraction 1/k! of their product cube.
TensorReport tensor_estimate_2d(const GridFunction2D& G, const GridFunction2D& H, const KernelParams& params);

// Same cell rule with the dominating kernel
// |u-xi|^{-gamma} |xi|^{-beta} |u|^{-alpha} |v-eta|^{-gamma} |eta|^{-beta} |v|^{-alpha}
// over {xi <= u, eta <= v}.
double tensor_dominating_2d(const GridFunction2D& G, const GridFunction2D& H, const KernelParams& params);

// int int_{xi <= u} h(u) g(xi) |u-xi|^{-gamma} |xi|^{-beta} |u|^{-alpha} with the same cell rule.
double dominating_pair_1d(const GridFunction1D& g, const GridFunction1D& h, const KernelParams& params);

}  // namespace wavelab
