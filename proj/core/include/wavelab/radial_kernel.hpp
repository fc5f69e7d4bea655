#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <optional>
#include <vector>

#include "wavelab/radial_field.hpp"

namespace wavelab {

// Legendre polynomial P_m(mu) by the three-term recurrence.
// Throws std::invalid_argument for m < 0 or mu outside [-1 - 1e-12, 1 + 1e-12].
double legendre(int m, double mu);

// Monomial coefficients c[k] of P_m(mu) = sum_k c[k] mu^k.
std::vector<double> legendre_coefficients(int m);

// (r^2 + rho^2 - tau^2) / (2 r rho); clamped to [-1, 1] when the overshoot is
// within 1e-12. Throws std::invalid_argument for r <= 0 or rho <= 0.
double mu(double r, double rho, double tau);

// Declared support {s in [s0, s1], s - rho in [d0, d1]} of a forcing term.
struct SupportBox {
  double s0 = 0.0;
  double s1 = 0.0;
  double d0 = 0.0;
  double d1 = 0.0;

  [[nodiscard]] bool contains(double s, double rho) const {
    return s >= s0 && s <= s1 && s - rho >= d0 && s - rho <= d1;
  }
  // Smallest rho reachable inside the box.
  [[nodiscard]] double min_rho() const { return s0 - d1; }
};

// Radial forcing F(s, rho), either closure-backed or sampled on a grid
// (bilinear interpolation, zero outside the grid).
class RadialForcing {
 public:
  using Fn = std::function<double(double, double)>;

  static RadialForcing from_function(Fn fn, std::optional<SupportBox> support = std::nullopt);
  static RadialForcing from_field(RadialField field, std::optional<SupportBox> support = std::nullopt);
  static RadialForcing zero();

  double operator()(double s, double rho) const;

  [[nodiscard]] bool sampled() const { return field_.has_value(); }
  [[nodiscard]] const RadialField* field() const { return field_ ? &*field_ : nullptr; }
  [[nodiscard]] const std::optional<SupportBox>& support() const { return support_; }

  // Samples random points outside the declared box (within the given extent)
  // and returns how many carry a nonzero value. Zero when no box is declared.
  [[nodiscard]] std::size_t support_violations(double s_max, double rho_max, std::size_t samples,
                                               std::uint64_t seed) const;

 private:
  Fn fn_;
  std::optional<RadialField> field_;
  std::optional<SupportBox> support_;
};

struct DuhamelOptions {
  // Quadrature steps are (dt/refine, dr/refine); output stays on the grid.
  int refine = 1;
  // Normalization of the representation formula; <= 0 selects kappa(n).
  double kappa = 0.0;
};

// Normalization of the odd-dimensional radial representation formula.
double kappa(int n);

// Zero-data solution of the radial wave equation with forcing F:
//   w(t,r) = kappa r^{-(n-1)/2} int_0^t int_{|t-r-s|}^{t+r-s} P_m(mu) F(s,rho) rho^{(n-1)/2} drho ds,
// m = (n-3)/2. The inner integral is exact for F piecewise linear in rho;
// the outer integral is the trapezoid rule on the t-grid. Nodes with r = 0
// take the exact r -> 0 limit of the quadrature for n = 3 and are
// extrapolated in r^2 from r = dr, 2dr otherwise.
// Throws std::invalid_argument for even or n < 3, and for a declared support
// box that reaches rho <= 0.
RadialField duhamel_radial(const RadialForcing& F, int n, const Grid& grid, const DuhamelOptions& opts = {});

// Smooth bump supported in the declared box, peak 1 at the box center:
// phi((s - s_mid)/(s_half)) phi((s - rho - d_mid)/(d_half)), phi(x) = exp(1 - 1/(1-x^2)).
RadialForcing cone_bump(const SupportBox& box);

// Incremental form of the representation-formula quadrature. Rows of the
// forcing at s_q = q ds are appended in order; value(t, r) uses the rows with
// s_q <= t (the row at s = t carries an empty rho-interval). Evaluation is
// const and may run concurrently once rows are appended.
class DuhamelQuadrature {
 public:
  DuhamelQuadrature(int n, double ds, double drho, std::size_t nrho, double kappa = 0.0);
  ~DuhamelQuadrature();
  DuhamelQuadrature(DuhamelQuadrature&&) noexcept;
  DuhamelQuadrature& operator=(DuhamelQuadrature&&) noexcept;

  // values[l] = F(s_q, l drho); shorter rows are zero-padded.
  void append_row(std::span<const double> values);
  [[nodiscard]] std::size_t rows() const;

  // Requires r > 0 and rows() > floor(t/ds + 1e-9) - 1.
  [[nodiscard]] double value(double t, double r) const;
  // Limit of value(t, r) as r -> 0; n = 3 only.
  [[nodiscard]] double axis_value(double t) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Ratio (t^2/2) / w_1 at interior nodes, where w_1 is the formula with kappa = 1
// and F = 1; returns the mean over nodes with t >= t_max/2 and r >= r_max/4.
double calibrate_kappa(int n, const Grid& grid);

}  // namespace wavelab
