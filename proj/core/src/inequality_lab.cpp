#include "wavelab/inequality_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace wavelab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Parallel loops fill per-index partials; summing them in index order keeps
// results independent of the thread count and schedule.
double ordered_sum(const std::vector<double>& parts) { return std::accumulate(parts.begin(), parts.end(), 0.0); }

double midpoint_lq(const std::vector<double>& f, double h, double q) {
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), q);
  return std::pow(s * h, 1.0 / q);
}

// int_a^b |u - x|^{-s} dx.
double riesz_cell(double a, double b, double u, double s) {
  const double e = 1.0 - s;
  if (u <= a) return (std::pow(b - u, e) - std::pow(a - u, e)) / e;
  if (u >= b) return (std::pow(u - a, e) - std::pow(u - b, e)) / e;
  return (std::pow(u - a, e) + std::pow(b - u, e)) / e;
}

// int_0^x g(xi) xi^{-beta} dxi for piecewise-constant g.
double weighted_mass(const GridFunction1D& g, double beta, double x) {
  x = std::min(x, g.L);
  double s = 0.0;
  const double e = 1.0 - beta;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = static_cast<double>(k) * g.h;
    if (a >= x) break;
    const double b = std::min(a + g.h, x);
    s += g.values[k] * (std::pow(b, e) - std::pow(a, e)) / e;
  }
  return s;
}

// Average of |x - y|^{-gamma} over two cells of width h whose indices differ by d.
std::vector<double> distance_averages(std::size_t n, double h, double gamma) {
  const double c = 1.0 / ((1.0 - gamma) * (2.0 - gamma));
  auto phi = [&](double x) { return c * std::pow(std::abs(x), 2.0 - gamma); };
  std::vector<double> k(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double x = static_cast<double>(d);
    k[d] = std::pow(h, -gamma) * (phi(x + 1.0) - 2.0 * phi(x) + phi(x - 1.0));
  }
  return k;
}

// Average of x^{-a} over cell i.
std::vector<double> power_averages(std::size_t n, double h, double a) {
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    k[i] = std::pow(h, -a) * (std::pow(x + 1.0, 1.0 - a) - std::pow(x, 1.0 - a)) / (1.0 - a);
  }
  return k;
}

// Share of the product cube on which the (weakly ordered) chain is strictly ordered.
double tie_fraction(std::array<std::size_t, 4> chain) {
  static constexpr std::array<double, 5> inv_fact = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
  double f = 1.0;
  std::size_t run = 1;
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (chain[k] == chain[k - 1]) {
      ++run;
    } else {
      f *= inv_fact[run];
      run = 1;
    }
  }
  return f * inv_fact[run];
}

void check_tensor(const GridFunction2D& G, const GridFunction2D& H, const KernelParams& k) {
  if (G.n != H.n || G.n == 0 || std::abs(G.L - H.L) > 1e-12 * G.L)
    throw std::invalid_argument("tensor_estimate_2d: G and H must share a grid");
  if (!(k.gamma < 1.0 && k.beta < 1.0 && k.alpha < 1.0))
    throw std::invalid_argument("tensor_estimate_2d: alpha, beta, gamma must be < 1");
  if (!(k.gamma >= 0.0)) throw std::invalid_argument("tensor_estimate_2d: gamma must be >= 0");
}

}  // namespace

RatioReport ratio_1d(const std::vector<GridFunction1D>& family, const KernelParams& params) {
  RatioReport rep;
  rep.violation = params.violation();
  rep.admissible = rep.violation.empty();
  if (family.empty()) return rep;
  const auto& g0 = family.front();
  for (const auto& g : family) {
    g.validate();
    if (g.size() != g0.size() || std::abs(g.L - g0.L) > 1e-12 * g0.L)
      throw std::invalid_argument("ratio_1d: family members must share a grid");
  }
  const FracIntegralOperator op(g0.L, g0.size(), params);
  rep.ratios.assign(family.size(), kNaN);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double ng = family[i].lp_norm(params.p);
    if (ng == 0.0) continue;
    rep.ratios[i] = op.apply(family[i]).lp_norm(params.q) / ng;
  }
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    if (std::isnan(rep.ratios[i])) {
      ++rep.undefined;
    } else if (rep.ratios[i] > rep.sup_ratio) {
      rep.sup_ratio = rep.ratios[i];
      rep.argmax = i;
    }
  }
  if (rep.undefined == family.size()) rep.sup_ratio = kNaN;
  return rep;
}

std::vector<double> riesz_potential(const GridFunction1D& g, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("riesz_potential: exponent must lie in (0, 1)");
  const std::size_t n = g.size();
  std::vector<double> ker(n);
  for (std::size_t d = 0; d < n; ++d) ker[d] = riesz_cell(static_cast<double>(d) * g.h, static_cast<double>(d + 1) * g.h, 0.5 * g.h, s);
  std::vector<double> f(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += g.values[k] * ker[i > k ? i - k : k - i];
    f[i] = acc;
  }
  return f;
}

HardyLittlewoodReport hardy_littlewood_check(const GridFunction1D& g, double s, double p, double q) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("hardy_littlewood_check: exponent must lie in (0, 1)");
  if (!(p >= 1.0 && p < q)) throw std::invalid_argument("hardy_littlewood_check: requires 1 <= p < q");
  if (!(s * q > 1.0)) throw std::invalid_argument("hardy_littlewood_check: s q must exceed 1");
  g.validate();
  HardyLittlewoodReport rep;
  rep.norm_g = g.lp_norm(p);
  if (rep.norm_g == 0.0) {
    rep.ratio = kNaN;
    return rep;
  }
  // Evaluation window: support hull widened by 8 hull widths on each side.
  std::size_t lo = g.size(), hi = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.values[k] != 0.0) {
      lo = std::min(lo, k);
      hi = k;
    }
  const std::size_t width = hi - lo + 1;
  const std::size_t pad = 8 * width;
  const std::size_t m = width + 2 * pad;  // window cells; window cell j sits at hull offset j - pad
  std::vector<double> ker(width + pad);
  for (std::size_t d = 0; d < ker.size(); ++d)
    ker[d] = riesz_cell(static_cast<double>(d) * g.h, static_cast<double>(d + 1) * g.h, 0.5 * g.h, s);
  std::vector<double> cell(m);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t pos = k + pad;
      acc += g.values[lo + k] * ker[j > pos ? j - pos : pos - j];
    }
    cell[j] = std::pow(std::abs(acc), q);
  }
  const double inner = ordered_sum(cell) * g.h;
  // Far field: f2 ~ M |u - c|^{-s} beyond the window.
  double mass = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    const double v = g.values[lo + k] * g.h;
    mass += v;
    moment += v * (static_cast<double>(k) + 0.5);
  }
  double tail = 0.0;
  if (mass != 0.0) {
    const double c = moment / mass;  // hull-relative, in cells
    const double d_left = (static_cast<double>(pad) + c) * g.h;
    const double d_right = (static_cast<double>(pad + width) - c) * g.h;
    const double e = s * q - 1.0;
    tail = std::pow(std::abs(mass), q) * (std::pow(d_left, -e) + std::pow(d_right, -e)) / e;
  }
  rep.norm_f = std::pow(inner + tail, 1.0 / q);
  rep.tail_fraction = tail / (inner + tail);
  rep.ratio = rep.norm_f / rep.norm_g;
  return rep;
}

SplittingReport splitting_check(const GridFunction1D& g, const KernelParams& k) {
  g.validate();
  if (std::any_of(g.values.begin(), g.values.end(), [](double v) { return v < 0.0; }))
    throw std::invalid_argument("splitting_check: g must be nonnegative");
  if (k.alpha + k.beta < -1e-12) throw std::invalid_argument("splitting_check: requires alpha + beta >= 0");
  SplittingReport rep;
  rep.c_split_derived = std::max(std::pow(2.0, std::max(k.gamma, 0.0)), std::pow(2.0, std::max(k.beta, 0.0)));
  const auto f = frac_integral(g, k).values;
  const double s = k.alpha + k.beta + k.gamma;
  const auto f2 = riesz_potential(g, s);
  const std::size_t n = g.size();
  std::vector<double> f1(n), f1_half(n);
  const double ag = k.alpha + k.gamma;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = g.center(i);
    f1[i] = std::pow(u, -ag) * weighted_mass(g, k.beta, 0.5 * u);
    f1_half[i] = std::pow(0.5 * u, -ag) * weighted_mass(g, k.beta, 0.25 * u);
  }
  const double shrink = std::pow(2.0, -ag);
  for (std::size_t i = 0; i < n; ++i) {
    if (f1[i] + f2[i] > 0.0) rep.c_split_fitted = std::max(rep.c_split_fitted, f[i] / (f1[i] + f2[i]));
    if (f2[i] > 0.0) rep.c_self_fitted = std::max(rep.c_self_fitted, std::max(0.0, f1[i] - shrink * f1_half[i]) / f2[i]);
  }
  rep.split_holds = rep.c_split_fitted <= rep.c_split_derived * (1.0 + 1e-12);
  rep.norm_f1 = midpoint_lq(f1, g.h, k.q);
  rep.norm_f2 = midpoint_lq(f2, g.h, k.q);
  rep.self_similar_applicable = ag > 1.0 / k.q;
  if (rep.self_similar_applicable) {
    rep.norm_bound = rep.c_self_fitted * rep.norm_f2 / (1.0 - std::pow(2.0, 1.0 / k.q - ag));
    rep.norm_bound_holds = rep.norm_f1 <= 1.1 * rep.norm_bound;
  } else {
    rep.norm_bound = std::numeric_limits<double>::infinity();
  }
  return rep;
}

DominationSides domination_sides(double u, double v, double xi, double eta, const KernelParams& k) {
  DominationSides d;
  d.log_lhs = -k.gamma * std::log(u - v) - k.gamma * std::log(xi - eta) - k.beta * std::log(xi * eta) -
              k.alpha * std::log(u * v);
  d.log_rhs = (-k.gamma * std::log(u - xi) - k.beta * std::log(xi) - k.alpha * std::log(u)) +
              (-k.gamma * std::log(v - eta) - k.beta * std::log(eta) - k.alpha * std::log(v));
  return d;
}

DominationReport kernel_domination_2d(std::size_t sample_count, const KernelParams& k, std::uint64_t seed) {
  constexpr std::size_t kChunk = 4096;
  DominationReport rep;
  rep.samples = sample_count;
  rep.worst_log_excess = -std::numeric_limits<double>::infinity();
  const std::size_t chunks = (sample_count + kChunk - 1) / kChunk;
  std::size_t violations = 0, degenerate = 0;
  double worst = rep.worst_log_excess;
#pragma omp parallel for reduction(+ : violations, degenerate) reduction(max : worst) schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::size_t end = std::min(sample_count, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      std::array<double, 4> x = {u01(rng), u01(rng), u01(rng), u01(rng)};
      std::sort(x.begin(), x.end());  // eta <= v <= xi <= u
      const auto d = domination_sides(x[3], x[1], x[2], x[0], k);
      if (!std::isfinite(d.log_lhs) || !std::isfinite(d.log_rhs)) {
        ++degenerate;
        continue;
      }
      const double excess = d.log_lhs - d.log_rhs;
      worst = std::max(worst, excess);
      if (excess > 1e-12 * (1.0 + std::abs(d.log_lhs) + std::abs(d.log_rhs))) ++violations;
    }
  }
  rep.violations = violations;
  rep.degenerate = degenerate;
  rep.worst_log_excess = worst;
  return rep;
}

double GridFunction2D::lp_norm(double p) const {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * h() * h(), 1.0 / p);
}

GridFunction2D GridFunction2D::sample(double length, std::size_t cells, const std::function<double(double, double)>& fn) {
  GridFunction2D g(length, cells);
  const double h = g.h();
  for (std::size_t i = 0; i < cells; ++i)
    for (std::size_t j = 0; j < cells; ++j) g(i, j) = fn((i + 0.5) * h, (j + 0.5) * h);
  return g;
}

TensorReport tensor_estimate_2d(const GridFunction2D& G, const GridFunction2D& H, const KernelParams& k) {
  check_tensor(G, H, k);
  const std::size_t n = G.n;
  const double h = G.h();
  const auto kg = distance_averages(n, h, k.gamma);
  const auto bb = power_averages(n, h, k.beta);
  const auto aa = power_averages(n, h, k.alpha);
  std::vector<double> rows(n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t ie = 0; ie <= ix; ++ie) {
      const double gv = G(ix, ie) * kg[ix - ie] * bb[ix] * bb[ie];
      if (gv == 0.0) continue;
      double inner = 0.0;
      for (std::size_t iv = ie; iv <= ix; ++iv)
        for (std::size_t iu = ix; iu < n; ++iu) {
          const double hv = H(iu, iv);
          if (hv == 0.0) continue;
          inner += hv * kg[iu - iv] * aa[iu] * aa[iv] * tie_fraction({ie, iv, ix, iu});
        }
      rows[ix] += gv * inner;
    }
  }
  TensorReport rep;
  rep.integral = ordered_sum(rows) * h * h * h * h;
  const double qd = k.q / (k.q - 1.0);
  const double denom = G.lp_norm(qd) * H.lp_norm(qd);
  rep.ratio = denom > 0.0 ? rep.integral / denom : 0.0;
  return rep;
}

double tensor_dominating_2d(const GridFunction2D& G, const GridFunction2D& H, const KernelParams& k) {
  check_tensor(G, H, k);
  const std::size_t n = G.n;
  const double h = G.h();
  const auto kg = distance_averages(n, h, k.gamma);
  const auto bb = power_averages(n, h, k.beta);
  const auto aa = power_averages(n, h, k.alpha);
  std::vector<double> rows(n, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t ix = 0; ix < n; ++ix)
    for (std::size_t ie = 0; ie < n; ++ie) {
      const double gv = G(ix, ie) * bb[ix] * bb[ie];
      if (gv == 0.0) continue;
      double inner = 0.0;
      for (std::size_t iu = ix; iu < n; ++iu) {
        const double k1 = kg[iu - ix] * aa[iu] * (iu == ix ? 0.5 : 1.0);
        for (std::size_t iv = ie; iv < n; ++iv)
          inner += H(iu, iv) * k1 * kg[iv - ie] * aa[iv] * (iv == ie ? 0.5 : 1.0);
      }
      rows[ix] += gv * inner;
    }
  return ordered_sum(rows) * h * h * h * h;
}

double dominating_pair_1d(const GridFunction1D& g, const GridFunction1D& hf, const KernelParams& k) {
  if (g.size() != hf.size()) throw std::invalid_argument("dominating_pair_1d: grid mismatch");
  const std::size_t n = g.size();
  const double h = g.h;
  const auto kg = distance_averages(n, h, k.gamma);
  const auto bb = power_averages(n, h, k.beta);
  const auto aa = power_averages(n, h, k.alpha);
  double total = 0.0;
  for (std::size_t ix = 0; ix < n; ++ix)
    for (std::size_t iu = ix; iu < n; ++iu)
      total += g.values[ix] * bb[ix] * hf.values[iu] * aa[iu] * kg[iu - ix] * (iu == ix ? 0.5 : 1.0);
  return total * h * h;
}

}  // namespace wavelab
