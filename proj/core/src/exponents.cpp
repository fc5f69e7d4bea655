#include "wavelab/exponents.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wavelab {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num = n / (g == 0 ? 1 : g);
  den = d / (g == 0 ? 1 : g);
}

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::empty: return "empty";
    case WindowKind::degenerate: return "degenerate";
    case WindowKind::nonempty: return "nonempty";
  }
  return "unknown";
}

double strauss_quadratic(int n, double p) {
  return (n - 1) * p * p - (n + 1) * p - 2.0;
}

double critical_power(int n) {
  if (n < 2) throw std::invalid_argument("critical_power: n must be >= 2, got " + std::to_string(n));
  const double a = n - 1;
  const double b = n + 1;
  // Larger root of a p^2 - b p - 2; the product of roots is -2/a, so the
  // other root is negative and the larger one needs no cancellation guard.
  return (b + std::sqrt(b * b + 8.0 * a)) / (2.0 * a);
}

Rational conformal_power(int n) {
  if (n < 2) throw std::invalid_argument("conformal_power: n must be >= 2");
  return {n + 3, n - 1};
}

Rational strichartz_exponent(int n) {
  if (n < 2) throw std::invalid_argument("strichartz_exponent: n must be >= 2");
  return {2 * (n + 1), n - 1};
}

ExponentSet exponent_set(int n) {
  return {n, critical_power(n), conformal_power(n), strichartz_exponent(n)};
}

WeightWindow weight_window(int n, double p) {
  if (n < 2) throw std::invalid_argument("weight_window: n must be >= 2");
  if (!(p > 1.0)) throw std::invalid_argument("weight_window: p must be > 1");
  WeightWindow w;
  w.lower = 1.0 / (p * (p + 1.0));
  w.upper = ((n - 1) * p - (n + 1)) / (2.0 * (p + 1.0));
  // upper - lower = Q(p) / (2p(p+1)) with Q the Strauss quadratic; classify on
  // Q so the boundary p = p_c is resolved against the quadratic's own scale.
  const double q = strauss_quadratic(n, p);
  const double scale = (n - 1) * p * p + (n + 1) * p + 2.0;
  if (std::abs(q) <= kWindowTolerance * scale) {
    w.kind = WindowKind::degenerate;
  } else {
    w.kind = q > 0 ? WindowKind::nonempty : WindowKind::empty;
  }
  return w;
}

RadialEstimateParams thm14_params(int n, double q) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("thm14_params: n must be odd and >= 3");
  const double q_max = strichartz_exponent(n).value();
  if (!(q > 2.0) || q > q_max * (1.0 + 1e-15)) {
    throw std::invalid_argument("thm14_params: q must lie in (2, 2(n+1)/(n-1)]");
  }
  RadialEstimateParams r;
  r.n = n;
  r.q = q;
  r.gamma = (n - 1) * (0.5 - 1.0 / q);
  r.beta_max = 1.0 / q;
  r.sum = 2.0 / q;
  r.alpha_plus_beta = r.sum - r.gamma;
  return r;
}

}  // namespace wavelab
