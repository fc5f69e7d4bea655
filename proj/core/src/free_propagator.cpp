#include "wavelab/free_propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace wavelab {
namespace profiles {

RadialProfile zero() {
  return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};
}

RadialProfile bump(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("bump: radius must be positive");
  RadialProfile p;
  p.id = "bump";
  p.support = a;
  p.value = [a](double r) {
    const double x = std::abs(r) / a;
    if (x >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
  };
  p.derivative = [a](double r) {
    const double x = std::abs(r) / a;
    if (x >= 1.0) return 0.0;
    const double d = 1.0 - x * x;
    const double v = std::exp(1.0 - 1.0 / d);
    // d/dr exp(1 - 1/(1-x^2)) = v * (-2x/(1-x^2)^2) * (1/a), odd in r
    const double dv = -v * 2.0 * x / (d * d) / a;
    return r < 0 ? -dv : dv;
  };
  return p;
}

RadialProfile poly_bump(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("poly_bump: radius must be positive");
  RadialProfile p;
  p.id = "poly_bump";
  p.support = a;
  p.value = [a](double r) {
    const double x = r / a;
    if (std::abs(x) >= 1.0) return 0.0;
    const double d = 1.0 - x * x;
    return d * d * d * d;
  };
  p.derivative = [a](double r) {
    const double x = r / a;
    if (std::abs(x) >= 1.0) return 0.0;
    const double d = 1.0 - x * x;
    return 4.0 * d * d * d * (-2.0 * x / a);
  };
  return p;
}

RadialProfile by_id(const std::string& id, double radius) {
  if (id == "zero") return zero();
  if (id == "bump") return bump(radius);
  if (id == "poly_bump") return poly_bump(radius);
  throw std::invalid_argument("unknown profile id: " + id);
}

}  // namespace profiles

namespace {

// Psi(x) = int_0^x rho g(rho) drho by composite 8-point Gauss-Legendre on
// 256 panels across the support.
class RadialMoment {
 public:
  explicit RadialMoment(const RadialProfile& g) : g_(g) {
    const double a = g.support;
    if (a <= 0.0) return;
    const int panels = 256;
    step_ = a / panels;
    cum_.assign(panels + 1, 0.0);
    for (int k = 0; k < panels; ++k) cum_[k + 1] = cum_[k] + panel(k * step_, (k + 1) * step_);
  }

  double operator()(double x) const {
    x = std::abs(x);
    if (cum_.empty()) return 0.0;
    if (x >= g_.support) return cum_.back();
    const auto k = static_cast<std::size_t>(x / step_);
    return cum_[k] + panel(static_cast<double>(k) * step_, x);
  }

 private:
  double panel(double lo, double hi) const {
    static constexpr std::array<double, 4> xs{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                              0.9602898564975363};
    static constexpr std::array<double, 4> ws{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double rho = c + sgn * h * xs[i];
        s += ws[i] * rho * g_.value(rho);
      }
    }
    return s * h;
  }

  const RadialProfile& g_;
  double step_ = 0.0;
  std::vector<double> cum_;
};

}  // namespace

FreeSolution free_radial_n3(const RadialProfile& f, const RadialProfile& g, double eps, double R, const Grid& grid,
                            int n) {
  if (n != 3) throw std::invalid_argument("free_radial_n3: only n = 3 is supported");
  grid.validate();
  if (f.support > R - 1.0 + 1e-12 || g.support > R - 1.0 + 1e-12)
    throw std::invalid_argument("free_radial_n3: data support exceeds R - 1");

  const RadialMoment psi(g);
  // phi = odd extension of r f(r)
  auto phi = [&](double x) { return x * f.value(std::abs(x)); };

  FreeSolution out{RadialField(grid), 0.0};
  out.field.set_support_radius(R);
  for (std::size_t i = 0; i < grid.nt; ++i) {
    const double t = grid.t(i);
    for (std::size_t j = 0; j < grid.nr; ++j) {
      const double r = grid.r(j);
      double u;
      if (r < 0.5 * grid.dr) {
        u = f.value(t) + t * f.derivative(t) + t * g.value(t);
      } else {
        const double v = 0.5 * (phi(r + t) + phi(r - t)) + 0.5 * (psi(r + t) - psi(r - t));
        u = v / r;
      }
      u *= eps;
      out.field(i, j) = u;
      if (eps != 0.0)
        out.decay_constant = std::max(out.decay_constant, std::abs(u) * (1.0 + t) * (1.0 + std::abs(t - r)) / eps);
    }
  }
  return out;
}

}  // namespace wavelab
