#include "wavelab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavelab {

bool Region::contains(double t, double r) const {
  if (t < t_lo || t > t_hi) return false;
  if (r < r_lo || r > r_hi) return false;
  const double d = t - r;
  if (!(d > layer_lo && d <= layer_hi)) return false;
  if (interior && r > 0.5 * t) return false;
  return true;
}

Region Region::box(double t0, double t1, double r0, double r1) {
  Region reg;
  reg.id = "box";
  reg.t_lo = t0;
  reg.t_hi = t1;
  reg.r_lo = r0;
  reg.r_hi = r1;
  return reg;
}

double sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

std::vector<double> quadrature_weights(const Grid& grid, const Region& region, int n) {
  grid.validate();
  const double tol = 1e-12 * std::max(grid.t_max(), grid.r_max());
  const bool bounded_t = region.t_hi < 1e299;
  const bool bounded_r = region.r_hi < 1e299;
  if ((bounded_t && region.t_hi > grid.t_max() + tol) || (bounded_r && region.r_hi > grid.r_max() + tol) ||
      region.t_lo < -tol || region.r_lo > grid.r_max() + tol)
    throw std::invalid_argument("weighted_norm: region '" + region.id + "' extends beyond the grid");

  const double cn = sphere_area(n);
  std::vector<double> w(grid.size(), 0.0);
  const double quarter = 0.25 * grid.dt * grid.dr;
  for (std::size_t i = 0; i + 1 < grid.nt; ++i) {
    const double tc = grid.t(i) + 0.5 * grid.dt;
    for (std::size_t j = 0; j + 1 < grid.nr; ++j) {
      if (!region.contains(tc, grid.r(j) + 0.5 * grid.dr)) continue;
      w[i * grid.nr + j] += quarter;
      w[i * grid.nr + j + 1] += quarter;
      w[(i + 1) * grid.nr + j] += quarter;
      w[(i + 1) * grid.nr + j + 1] += quarter;
    }
  }
  for (std::size_t i = 0; i < grid.nt; ++i)
    for (std::size_t j = 0; j < grid.nr; ++j) w[i * grid.nr + j] *= cn * std::pow(grid.r(j), n - 1);
  return w;
}

double weighted_norm(const RadialField& u, const WeightSpec& ws, const Region& region, int n) {
  if (!(ws.q >= 1.0)) throw std::invalid_argument("weighted_norm: q must be >= 1");
  const Grid& g = u.grid();
  const std::vector<double> w = quadrature_weights(g, region, n);
  // Fixed-order pairwise reduction over rows keeps the sum reproducible.
  std::vector<double> rows(g.nt, 0.0);
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double tr = g.t(i) + ws.R;
    double acc = 0.0;
    for (std::size_t j = 0; j < g.nr; ++j) {
      const double wk = w[i * g.nr + j];
      if (wk == 0.0) continue;
      const double val = u(i, j);
      if (val == 0.0) continue;
      if (ws.gamma == 0.0) {
        acc += wk * std::pow(std::abs(val), ws.q);
        continue;
      }
      const double r = g.r(j);
      const double base = tr * tr - r * r;
      if (!(base > 0.0))
        throw std::invalid_argument("weighted_norm: field nonzero where the weight is undefined (t=" +
                                    std::to_string(g.t(i)) + ", r=" + std::to_string(r) + ")");
      const double weighted = std::pow(base, ws.gamma) * std::abs(val);
      acc += wk * std::pow(weighted, ws.q);
    }
    rows[i] = acc;
  }
  for (std::size_t width = 1; width < rows.size(); width *= 2)
    for (std::size_t k = 0; k + width < rows.size(); k += 2 * width) rows[k] += rows[k + width];
  return std::pow(rows.empty() ? 0.0 : rows[0], 1.0 / ws.q);
}

NullPoint null_coords(double t, double r) { return {t + r, t - r}; }

std::pair<double, double> from_null_coords(double u, double v, bool require_nonnegative_radius) {
  if (require_nonnegative_radius && u < v) throw std::invalid_argument("from_null_coords: u < v gives negative radius");
  return {0.5 * (u + v), 0.5 * (u - v)};
}

std::vector<Region> dyadic_layers(double T, double t_minus_r_max) {
  if (!(T >= 2.0)) throw std::invalid_argument("dyadic_layers: T must be >= 2");
  std::vector<Region> out;
  const double top = std::min(4.0 * T, t_minus_r_max);
  double lo = 1.0;
  for (int k = 1; lo < top; ++k) {
    const double dyadic = std::ldexp(1.0, k);
    const bool remainder = dyadic > 4.0 * T;
    Region reg;
    reg.t_lo = 0.5 * T;
    reg.t_hi = T;
    reg.layer_lo = lo;
    reg.layer_hi = std::min(remainder ? 4.0 * T : dyadic, top);
    reg.id = remainder ? "layer_rem" : "layer_" + std::to_string(k);
    out.push_back(reg);
    if (remainder) break;
    lo = dyadic;
  }
  return out;
}

}  // namespace wavelab
