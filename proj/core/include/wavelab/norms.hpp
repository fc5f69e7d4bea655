#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavelab/radial_field.hpp"

namespace wavelab {

// Weight ((t+R)^2 - r^2)^gamma in an L^q norm.
struct WeightSpec {
  double gamma = 0.0;
  double R = 0.0;
  double q = 2.0;
};

// Subset of the (t, r) quarter plane; a grid cell belongs to the region when
// its center does.
struct Region {
  std::string id = "all";
  double t_lo = 0.0;
  double t_hi = 1e300;
  // Cone layer a < t - r <= b.
  double layer_lo = -1e300;
  double layer_hi = 1e300;
  bool interior = false;  // additionally r <= t/2

  [[nodiscard]] bool contains(double t, double r) const;

  static Region everything() { return {}; }
  static Region box(double t0, double t1, double r0, double r1);

  // Optional radial window, used by box regions.
  double r_lo = -1e300;
  double r_hi = 1e300;
};

// Surface area of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

// (int int_region |((t+R)^2 - r^2)^gamma u|^q c_n r^{n-1} dr dt)^{1/q} by the
// product trapezoid rule on each member cell.
// Throws std::invalid_argument for q < 1, a region reaching past the grid,
// or u != 0 at a node where (t+R)^2 <= r^2 while gamma != 0.
double weighted_norm(const RadialField& u, const WeightSpec& w, const Region& region, int n = 3);

// Node weights of the cell quadrature used by weighted_norm (c_n r^{n-1}
// included, weight function excluded).
std::vector<double> quadrature_weights(const Grid& grid, const Region& region, int n = 3);

struct NullPoint {
  double u = 0.0;  // t + r
  double v = 0.0;  // t - r
};

NullPoint null_coords(double t, double r);
// Throws std::invalid_argument when u < v and a nonnegative radius is required.
std::pair<double, double> from_null_coords(double u, double v, bool require_nonnegative_radius = true);

// Strip [T/2, T] intersected with cone layers (2^{k-1}, 2^k] for 2^k <= 4T,
// plus a remainder layer up to 4T when 4T is not a power of two; layers are
// clipped at t_minus_r_max. The base layer t - r <= 1 is excluded.
std::vector<Region> dyadic_layers(double T, double t_minus_r_max);

}  // namespace wavelab
