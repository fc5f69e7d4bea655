#include "wavelab/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wavelab {

RadialField fd_radial_solve(int n, const std::function<double(double)>& f, const std::function<double(double)>& g,
                            const std::function<double(double, double)>& F, const Grid& grid,
                            const FdOracleOptions& opts) {
  grid.validate();
  if (n < 2) throw std::invalid_argument("fd_radial_solve: n must be >= 2");
  if (opts.refine < 1) throw std::invalid_argument("fd_radial_solve: refine must be >= 1");

  const double h = grid.dr / opts.refine;
  const double courant = std::min(opts.courant, n == 3 ? 1.0 : 0.4);
  const auto substeps = static_cast<std::size_t>(std::ceil(grid.dt / (courant * h) - 1e-12));
  const double k = grid.dt / static_cast<double>(substeps);
  const auto nr = static_cast<std::size_t>(std::ceil((grid.r_max() + grid.t_max()) / h)) + 2;
  const auto ratio = static_cast<std::size_t>(opts.refine);

  std::vector<double> rr(nr);
  for (std::size_t j = 0; j < nr; ++j) rr[j] = static_cast<double>(j) * h;

  // Evolved unknown: v = r u for n = 3, u otherwise.
  const bool reduced = n == 3;
  std::vector<double> prev(nr), cur(nr), next(nr), lap(nr);

  auto laplacian = [&](const std::vector<double>& v) {
    std::fill(lap.begin(), lap.end(), 0.0);
    if (reduced) {
      for (std::size_t j = 1; j + 1 < nr; ++j) lap[j] = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
    } else {
      lap[0] = 2.0 * n * (v[1] - v[0]) / (h * h);
      for (std::size_t j = 1; j + 1 < nr; ++j) {
        const double rp = std::pow(rr[j] + 0.5 * h, n - 1), rm = std::pow(rr[j] - 0.5 * h, n - 1);
        lap[j] = (rp * (v[j + 1] - v[j]) - rm * (v[j] - v[j - 1])) / (std::pow(rr[j], n - 1) * h * h);
      }
    }
  };
  auto source = [&](double t, std::size_t j) { return reduced ? rr[j] * F(t, rr[j]) : F(t, rr[j]); };

  for (std::size_t j = 0; j < nr; ++j) cur[j] = reduced ? rr[j] * f(rr[j]) : f(rr[j]);
  laplacian(cur);
  for (std::size_t j = 0; j < nr; ++j) {
    const double gj = reduced ? rr[j] * g(rr[j]) : g(rr[j]);
    next[j] = cur[j] + k * gj + 0.5 * k * k * (lap[j] + source(0.0, j));
  }
  if (reduced) next[0] = 0.0;
  next[nr - 1] = 0.0;

  RadialField out(grid);
  auto record = [&](std::size_t i, const std::vector<double>& v) {
    for (std::size_t j = 1; j < grid.nr; ++j) {
      const std::size_t jj = j * ratio;
      out(i, j) = reduced ? v[jj] / rr[jj] : v[jj];
    }
    out(i, 0) = reduced ? (4.0 * out(i, 1) - out(i, 2)) / 3.0 : v[0];
  };
  record(0, cur);

  prev.swap(cur);
  cur.swap(next);
  std::size_t step = 1;
  for (std::size_t i = 1; i < grid.nt; ++i) {
    while (step < i * substeps) {
      const double t = static_cast<double>(step) * k;
      laplacian(cur);
      for (std::size_t j = 0; j < nr; ++j) next[j] = 2.0 * cur[j] - prev[j] + k * k * (lap[j] + source(t, j));
      if (reduced) next[0] = 0.0;
      next[nr - 1] = 0.0;
      prev.swap(cur);
      cur.swap(next);
      ++step;
    }
    record(i, cur);
  }
  return out;
}

RadialField dalembertian_n3(const RadialField& u) {
  const Grid& g = u.grid();
  RadialField box(g);
  for (std::size_t i = 1; i + 1 < g.nt; ++i) {
    for (std::size_t j = 1; j + 1 < g.nr; ++j) {
      auto v = [&](std::size_t a, std::size_t b) { return g.r(b) * u(a, b); };
      const double vtt = (v(i + 1, j) - 2.0 * v(i, j) + v(i - 1, j)) / (g.dt * g.dt);
      const double vrr = (v(i, j + 1) - 2.0 * v(i, j) + v(i, j - 1)) / (g.dr * g.dr);
      box(i, j) = (vtt - vrr) / g.r(j);
    }
  }
  return box;
}

}  // namespace wavelab
