#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavelab/free_propagator.hpp"
#include "wavelab/radial_field.hpp"
#include "wavelab/radial_kernel.hpp"

namespace wavelab {

enum class NonlinearityKind { absolute, signed_power, zero };

// F_p with |F_p(u)| <= c0 |u|^p and |F_p'(u)| <= c1 |u|^{p-1}.
struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::absolute;
  double p = 2.0;
  double c0 = 1.0;
  double c1 = 2.0;

  static Nonlinearity absolute(double p);      // |u|^p
  static Nonlinearity signed_power(double p);  // |u|^{p-1} u
  static Nonlinearity zero(double p);

  double operator()(double u) const;
  [[nodiscard]] double derivative(double u) const;

  // Number of sampled u in [-range, range] violating either bound.
  [[nodiscard]] std::size_t bound_violations(std::size_t samples, std::uint64_t seed, double range = 10.0) const;
};

std::string to_string(NonlinearityKind kind);
NonlinearityKind nonlinearity_kind_from_string(const std::string& s);

// Small-data Cauchy problem in three space dimensions on the truncated
// domain [0, t_max] x [0, t_max + R] with equal steps 1/cells_per_unit.
struct CauchyProblem {
  int n = 3;
  double eps = 0.1;
  RadialProfile f = profiles::bump(1.0);
  RadialProfile g = profiles::zero();
  double R = 2.0;
  Nonlinearity nonlinearity = Nonlinearity::absolute(2.5);
  double gamma = 0.0;
  double t_max = 10.0;
  int cells_per_unit = 10;

  [[nodiscard]] Grid grid() const;
  [[nodiscard]] double p() const { return nonlinearity.p; }
  [[nodiscard]] CauchyProblem refined(int factor) const;

  // Throws std::invalid_argument on n != 3, eps < 0, data support > R - 1,
  // p <= 1, or (when require_window) gamma outside the open weight window.
  void validate(bool require_window = true) const;
};

enum class IterationStatus { converged, max_steps, diverged };
std::string to_string(IterationStatus s);

struct IterationTrace {
  std::vector<double> A;        // weighted L^{p+1} norms of u_m
  std::vector<double> B;        // weighted L^{p+1} norms of u_m - u_{m-1}, B_0 = A_0
  std::vector<double> ratios;   // B_{m+1} / B_m
  std::vector<double> fp_diff;  // ||F_p(u_{m+1}) - F_p(u_m)||_{L^{(p+1)/p}}
  IterationStatus status = IterationStatus::max_steps;
  int steps = 0;                // index of the last computed iterate
  bool lemma_bounds = true;     // A_m <= 2 A_0 and 2 B_{m+1} <= B_m for all recorded m
  double residual = 0.0;        // ||box u - F_p(u)||_{L^2} over the cone interior
  double residual_relative = 0.0;
  double support_leak = 0.0;    // max |u| at r > t + R - 1 + dr, relative to max |u|
};

struct IterationOptions {
  int max_steps = 12;
  double tol = 1e-6;            // stop when B_m < tol A_0
  double divergence_factor = 10.0;
  bool require_window = true;
  bool keep_iterates = false;
};

struct PicardResult {
  RadialField u;
  IterationTrace trace;
  std::vector<RadialField> iterates;  // u_0 .. u_M when keep_iterates
};

// u_m = u_0 + duhamel(F_p(u_{m-1})), u_{-1} = 0.
PicardResult picard_iterate(const CauchyProblem& prob, const IterationOptions& opts = {});

// Weighted L^{p+1} norm used for A_m and B_m.
double iteration_norm(const RadialField& u, const CauchyProblem& prob);

// L^2 norm (r^2 dr dt) of box u - F_p(u) over interior nodes with r < t + R - 1.
struct Residual {
  double absolute = 0.0;
  double relative = 0.0;
};
Residual fixed_point_residual(const RadialField& u, const CauchyProblem& prob);

struct RefinementStudy {
  std::vector<int> cells_per_unit;
  std::vector<double> residuals;
  double order = 0.0;           // log2 of successive residual ratios (last pair)
  bool resolution_failure = false;  // residual did not decrease
};

// Reruns the iteration at cells_per_unit * 2^k, k = 0..levels-1.
RefinementStudy refinement_study(const CauchyProblem& prob, int levels = 2, const IterationOptions& opts = {});

struct ContractionFit {
  double constant_a = 0.0;  // max_m B_{m+1} / ((A_m + A_{m-1})^{p-1} B_m), first run
  double constant_b = 0.0;  // same, second run
  double ratio = 0.0;       // constant_b / constant_a
  double a0_ratio = 0.0;    // A_0(second) / A_0(first)
  bool consistent = true;   // ratio within [1/2, 2]
};

// Fits the iteration inequality constant on two converged traces.
// Throws std::invalid_argument for p <= 1 or traces that did not converge.
ContractionFit contraction_constant_check(const IterationTrace& first, const IterationTrace& second, double p);
double fit_contraction_constant(const IterationTrace& trace, double p);

// True when the trace stays in the contraction regime: not diverged and
// 2 B_{m+1} <= B_m for all recorded m.
bool contracts(const IterationTrace& trace);

struct ThresholdResult {
  double lo = 0.0;  // largest amplitude observed to contract
  double hi = 0.0;  // smallest amplitude observed to fail
  double estimate = 0.0;
  bool monotone_regime = false;
  int evaluations = 0;
};

// Bisection on eps in [eps_lo, eps_hi] until hi - lo <= resolution * eps_hi.
ThresholdResult epsilon_threshold_search(const CauchyProblem& templ, double eps_lo, double eps_hi, double resolution,
                                         const IterationOptions& opts = {});

enum class GrowthOutcome { growth, bounded, inconclusive };
std::string to_string(GrowthOutcome g);

struct BlowupResult {
  std::vector<double> windows;  // T_k
  std::vector<double> norms;    // weighted L^{p+1} norm over [0, T_k]
  GrowthOutcome outcome = GrowthOutcome::inconclusive;
  bool growth_flag = false;
  bool nonfinite = false;       // the marched solution overflowed
  double t_stop = 0.0;          // last time with a finite solution
};

struct BlowupOptions {
  double growth_factor = 4.0;
  int windows = 6;              // T_k = t_max / 2^{windows-1-k}
  double bounded_increment = 0.1;
  double overflow = 1e8;
};

// Time-marches the integral equation u = u_0 + duhamel(|u|^p) row by row.
// Requires p < critical_power(3) unless allow_supercritical.
BlowupResult blowup_indicator(const CauchyProblem& prob, const BlowupOptions& opts = {},
                              bool allow_supercritical = false);

// Marched solution of the integral equation; rows after t_stop are zero.
struct MarchResult {
  RadialField u;
  bool nonfinite = false;
  double t_stop = 0.0;
};
MarchResult march_integral_equation(const CauchyProblem& prob, double overflow = 1e8);

struct JohnRatio {
  double numerator = 0.0;    // sup t (t-r)^{p-2} |w|
  double denominator = 0.0;  // sup t^p (t-r)^{p(p-2)} |F|
  double ratio = 0.0;
  bool defined = false;
};

// Requires p in (1 + sqrt 2, 3] and F = 0 where t - r <= 1.
JohnRatio john_pointwise_check(const RadialField& w, const RadialField& F, double p);

// Forcing that saturates the denominator of the check:
// chi(t-r) t^{-p} (t-r)^{-p(p-2)}, chi a smooth step from 0 at t-r = 1 to 1 at t-r = 2.
RadialField john_forcing(const Grid& grid, double p);

}  // namespace wavelab
