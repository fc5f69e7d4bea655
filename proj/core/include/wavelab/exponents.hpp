#pragma once

#include <cstdint>
#include <string_view>

namespace wavelab {

// Exact rational with a positive denominator, reduced on construction.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Exponent relations of a given spatial dimension.
struct ExponentSet {
  int n = 3;
  double p_c = 0.0;        // critical (Strauss) power
  Rational p_conf;         // conformal power (n+3)/(n-1)
  Rational q_strichartz;   // 2(n+1)/(n-1)
};

enum class WindowKind { empty, degenerate, nonempty };

std::string_view to_string(WindowKind kind);

// Admissible open interval for the weight exponent of the solution class.
struct WeightWindow {
  double lower = 0.0;
  double upper = 0.0;
  WindowKind kind = WindowKind::empty;

  [[nodiscard]] bool nonempty() const { return kind == WindowKind::nonempty; }
  [[nodiscard]] double midpoint() const { return 0.5 * (lower + upper); }
  [[nodiscard]] bool contains(double gamma) const {
    return nonempty() && gamma > lower && gamma < upper;
  }
};

// Parameters of the radial weighted estimate for odd n and dual exponents.
struct RadialEstimateParams {
  int n = 3;
  double q = 4.0;
  double gamma = 0.0;        // (n-1)(1/2 - 1/q)
  double beta_max = 0.0;     // strict upper bound 1/q on beta
  double sum = 0.0;          // required alpha + beta + gamma = 2/q
  double alpha_plus_beta = 0.0;
};

// Value of (n-1)p^2 - (n+1)p - 2.
double strauss_quadratic(int n, double p);

// Root > 1 of the Strauss quadratic. Throws std::invalid_argument for n < 2.
double critical_power(int n);

Rational conformal_power(int n);
Rational strichartz_exponent(int n);
ExponentSet exponent_set(int n);

// Relative tolerance used to classify p = p_c as a degenerate window.
inline constexpr double kWindowTolerance = 1e-12;

// Throws std::invalid_argument for n < 2 or p <= 1.
WeightWindow weight_window(int n, double p);

// Requires odd n >= 3 and 2 < q <= 2(n+1)/(n-1).
RadialEstimateParams thm14_params(int n, double q);

}  // namespace wavelab
