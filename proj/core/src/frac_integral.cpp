#include "wavelab/inequality_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace wavelab {
namespace {

constexpr std::array<double, 4> kGlNodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                            0.8611363115940526};
constexpr std::array<double, 4> kGlWeights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                              0.3478548451374538};

std::mt19937_64 member_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

void check_exponents(const KernelParams& k) {
  if (!(k.gamma < 1.0)) throw std::invalid_argument("frac_integral: gamma must be < 1");
  if (!(k.beta < 1.0)) throw std::invalid_argument("frac_integral: beta must be < 1");
}

// Weights w_k with f(u) = sum_k w_k g_k for cells [k h, (k+1) h] below u.
void row_weights(double u, double h, std::size_t ncells, const KernelParams& k, std::vector<double>& w) {
  w.assign(ncells, 0.0);
  if (u <= 0.0) return;
  const auto full = static_cast<std::size_t>(std::floor(u / h));
  const std::size_t last = std::min(ncells, full + 1);  // cells touching [0, u)
  const double scale = std::pow(u, -k.alpha);
  for (std::size_t c = 0; c < last; ++c) {
    const double a = static_cast<double>(c) * h;
    const double b = std::min(a + h, u);
    if (b <= a) continue;
    const bool near = c < FracIntegralOperator::kExactCells ||
                      full - std::min(c, full) <= static_cast<std::size_t>(FracIntegralOperator::kExactCells);
    double s = 0.0;
    if (near) {
      s = singular_cell_integral(a, b, u, k.gamma, k.beta);
    } else {
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int q = 0; q < 4; ++q) {
        const double x = mid + half * kGlNodes[q];
        s += kGlWeights[q] * std::pow(u - x, -k.gamma) * std::pow(x, -k.beta);
      }
      s *= half;
    }
    w[c] = scale * s;
  }
}

}  // namespace

double KernelParams::scaling_defect() const { return alpha + beta + gamma - (1.0 - (1.0 / p - 1.0 / q)); }

std::string KernelParams::violation(double tol) const {
  if (!(p > 1.0 && p < q && std::isfinite(q))) return "requires 1 < p < q < inf";
  if (std::abs(scaling_defect()) > tol) return "alpha + beta + gamma != 1 - (1/p - 1/q)";
  if (alpha + beta < -tol) return "alpha + beta < 0";
  if (!(alpha + gamma > 1.0 / q + tol)) return "alpha + gamma <= 1/q";
  return {};
}

KernelParams KernelParams::dual(double q, double alpha, double beta, double gamma) {
  return {alpha, beta, gamma, q / (q - 1.0), q};
}

KernelParams KernelParams::from_radial(const RadialEstimateParams& r, double beta) {
  return dual(r.q, r.sum - r.gamma - beta, beta, r.gamma);
}

GridFunction1D::GridFunction1D(double length, std::size_t cells)
    : L(length), h(length / static_cast<double>(cells)), values(cells, 0.0) {
  if (cells == 0 || !(length > 0.0)) throw std::invalid_argument("GridFunction1D: need L > 0 and cells > 0");
}

double GridFunction1D::lp_norm(double p) const {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * h, 1.0 / p);
}

void GridFunction1D::validate() const {
  if (values.empty() || std::abs(static_cast<double>(values.size()) * h - L) > 1e-12 * L)
    throw std::invalid_argument("GridFunction1D: cell count * h != L");
  if (nonnegative && std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; }))
    throw std::invalid_argument("GridFunction1D: flagged nonnegative but has negative samples");
}

void GridFunction1D::refresh_sign() {
  nonnegative = std::none_of(values.begin(), values.end(), [](double v) { return v < 0.0; });
}

GridFunction1D GridFunction1D::sample(double length, std::size_t cells, const std::function<double(double)>& fn) {
  GridFunction1D g(length, cells);
  for (std::size_t i = 0; i < cells; ++i) g.values[i] = fn(g.center(i));
  g.refresh_sign();
  return g;
}

GridFunction1D GridFunction1D::power_law(double length, std::size_t cells, double a, double b, double c) {
  if (!(a < 1.0)) throw std::invalid_argument("power_law: exponent must be < 1");
  GridFunction1D g(length, cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = static_cast<double>(i) * g.h;
    const double hi = std::min(lo + g.h, b);
    if (hi <= lo) break;
    g.values[i] = c * (std::pow(hi, 1.0 - a) - std::pow(lo, 1.0 - a)) / ((1.0 - a) * g.h);
  }
  g.refresh_sign();
  return g;
}

double singular_cell_integral(double a, double b, double u, double gamma, double beta) {
  if (!(0.0 <= a && a <= b && b <= u * (1.0 + 1e-14)))
    throw std::invalid_argument("singular_cell_integral: need 0 <= a <= b <= u");
  if (b == a) return 0.0;
  const double A = 1.0 - beta, B = 1.0 - gamma;
  const double x0 = a / u, x1 = std::min(1.0, b / u);
  double d;
  // Difference on the side where the incomplete beta is small.
  if (x0 >= 0.5)
    d = boost::math::betac(A, B, x0) - (x1 < 1.0 ? boost::math::betac(A, B, x1) : 0.0);
  else
    d = boost::math::beta(A, B, x1) - (x0 > 0.0 ? boost::math::beta(A, B, x0) : 0.0);
  return std::pow(u, 1.0 - gamma - beta) * d;
}

FracIntegralOperator::FracIntegralOperator(double length, std::size_t cells, const KernelParams& params)
    : L_(length), n_(cells), params_(params) {
  check_exponents(params);
  if (cells == 0 || !(length > 0.0)) throw std::invalid_argument("FracIntegralOperator: empty grid");
  const double h = length / static_cast<double>(cells);
  packed_.assign(cells * (cells + 1) / 2, 0.0);
#pragma omp parallel
  {
    std::vector<double> w;
#pragma omp for schedule(dynamic, 16)
    for (std::size_t i = 0; i < cells; ++i) {
      row_weights((static_cast<double>(i) + 0.5) * h, h, i + 1, params, w);
      std::copy(w.begin(), w.end(), packed_.begin() + static_cast<std::ptrdiff_t>(i * (i + 1) / 2));
    }
  }
}

GridFunction1D FracIntegralOperator::apply(const GridFunction1D& g) const {
  if (g.size() != n_ || std::abs(g.L - L_) > 1e-12 * L_)
    throw std::invalid_argument("FracIntegralOperator: grid mismatch");
  GridFunction1D f(L_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = packed_.data() + i * (i + 1) / 2;
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += row[k] * g.values[k];
    f.values[i] = s;
  }
  f.refresh_sign();
  return f;
}

GridFunction1D frac_integral(const GridFunction1D& g, const KernelParams& params) {
  g.validate();
  return FracIntegralOperator(g.L, g.size(), params).apply(g);
}

double frac_integral_at(const GridFunction1D& g, const KernelParams& params, double u) {
  check_exponents(params);
  if (!(u > 0.0 && u <= g.L * (1.0 + 1e-14))) throw std::invalid_argument("frac_integral_at: u outside (0, L]");
  std::vector<double> w;
  row_weights(u, g.h, g.size(), params, w);
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * g.values[k];
  return s;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::bump: return "bump";
    case FamilyKind::power_law: return "power_law";
    case FamilyKind::mixed: return "mixed";
  }
  return "?";
}

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "bump") return FamilyKind::bump;
  if (s == "power_law") return FamilyKind::power_law;
  if (s == "mixed") return FamilyKind::mixed;
  throw std::invalid_argument("unknown family kind: " + s);
}

GridFunction1D family_member(const FamilySpec& spec, std::size_t index, double length, std::size_t cells) {
  auto rng = member_rng(spec.seed, index);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double S = std::min(spec.support, length);
  bool bump = spec.kind == FamilyKind::bump;
  if (spec.kind == FamilyKind::mixed) bump = u01(rng) < 0.5;
  if (bump) {
    const double c = S * u01(rng);
    const double w = 0.05 + (0.5 * S - 0.05) * u01(rng);
    const double amp = 0.5 + u01(rng);
    return GridFunction1D::sample(length, cells, [=](double x) {
      const double y = (x - c) / w;
      if (std::abs(y) >= 1.0 || x > S) return 0.0;
      return amp * std::exp(1.0 - 1.0 / (1.0 - y * y));
    });
  }
  // Exponent kept below 0.7 so members lie in L^p for p up to 1/0.7.
  const double a = 0.7 * u01(rng);
  const double b = 0.25 + (S - 0.25) * u01(rng);
  return GridFunction1D::power_law(length, cells, a, b, 0.5 + u01(rng));
}

GridFunction1D adversarial_member(double length, std::size_t cells, double p, double delta, double floor) {
  if (!(0.0 < floor && floor < delta && delta < 1.0)) throw std::invalid_argument("adversarial_member: need 0 < floor < delta < 1");
  GridFunction1D g(length, cells);
  auto fn = [p](double x) { return std::pow(x, -1.0 / p) / std::log(1.0 / x); };
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = std::max(static_cast<double>(i) * g.h, floor);
    const double hi = std::min(static_cast<double>(i + 1) * g.h, delta);
    if (hi <= lo) continue;
    // 4 panels of 4-point Gauss-Legendre; the integrand is smooth on [floor, delta].
    double s = 0.0;
    const double pw = (hi - lo) / 4.0;
    for (int k = 0; k < 4; ++k)
      for (int q = 0; q < 4; ++q) s += kGlWeights[q] * fn(lo + pw * (k + 0.5 + 0.5 * kGlNodes[q]));
    g.values[i] = s * 0.5 * pw / g.h;
  }
  return g;
}

}  // namespace wavelab
