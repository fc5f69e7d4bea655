#include "wavelab/radial_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace wavelab {

double legendre(int m, double mu) {
  if (m < 0) throw std::invalid_argument("legendre: degree must be >= 0");
  if (!(mu >= -1.0 - 1e-12 && mu <= 1.0 + 1e-12))
    throw std::invalid_argument("legendre: mu outside [-1, 1]: " + std::to_string(mu));
  mu = std::clamp(mu, -1.0, 1.0);
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = mu;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0) * mu * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> legendre_coefficients(int m) {
  if (m < 0) throw std::invalid_argument("legendre_coefficients: degree must be >= 0");
  std::vector<double> prev{1.0};
  if (m == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int k = 1; k < m; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += (2.0 * k + 1.0) * cur[i] / (k + 1.0);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= k * prev[i] / (k + 1.0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double mu(double r, double rho, double tau) {
  if (!(r > 0.0) || !(rho > 0.0)) throw std::invalid_argument("mu: r and rho must be positive");
  const double v = (r * r + rho * rho - tau * tau) / (2.0 * r * rho);
  if (v > 1.0 && v <= 1.0 + 1e-12) return 1.0;
  if (v < -1.0 && v >= -1.0 - 1e-12) return -1.0;
  return v;
}

// ---------------------------------------------------------------------------

RadialForcing RadialForcing::from_function(Fn fn, std::optional<SupportBox> support) {
  RadialForcing f;
  f.fn_ = std::move(fn);
  f.support_ = support;
  return f;
}

RadialForcing RadialForcing::from_field(RadialField field, std::optional<SupportBox> support) {
  RadialForcing f;
  f.field_ = std::move(field);
  f.support_ = support;
  return f;
}

RadialForcing RadialForcing::zero() {
  return from_function([](double, double) { return 0.0; });
}

double RadialForcing::operator()(double s, double rho) const {
  if (!field_) return fn_(s, rho);
  const Grid& g = field_->grid();
  const double x = s / g.dt;
  const double y = rho / g.dr;
  if (x < 0.0 || y < 0.0 || x > static_cast<double>(g.nt - 1) || y > static_cast<double>(g.nr - 1)) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(x), g.nt - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(y), g.nr - 2);
  const double a = x - static_cast<double>(i);
  const double b = y - static_cast<double>(j);
  const RadialField& v = *field_;
  return (1 - a) * ((1 - b) * v(i, j) + b * v(i, j + 1)) + a * ((1 - b) * v(i + 1, j) + b * v(i + 1, j + 1));
}

std::size_t RadialForcing::support_violations(double s_max, double rho_max, std::size_t samples,
                                              std::uint64_t seed) const {
  if (!support_) return 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(0.0, s_max), ur(0.0, rho_max);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = us(rng), rho = ur(rng);
    if (!support_->contains(s, rho) && (*this)(s, rho) != 0.0) ++bad;
  }
  return bad;
}

// ---------------------------------------------------------------------------

double kappa(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("kappa: n must be odd and >= 3");
  return 0.5;
}

namespace {

double ipow(double x, int e);

// Cumulative moments int_0^rho x^e F(x) dx of a piecewise-linear profile on a
// uniform rho-grid, exact for each power e = 1..emax.
class MomentTable {
 public:
  MomentTable(std::vector<double> values, double h, int emax)
      : f_(std::move(values)), h_(h), emax_(emax), cum_(static_cast<std::size_t>(emax) * (f_.size())) {
    for (int e = 1; e <= emax_; ++e) {
      double* c = &cum_[static_cast<std::size_t>(e - 1) * f_.size()];
      c[0] = 0.0;
      for (std::size_t j = 0; j + 1 < f_.size(); ++j) c[j + 1] = c[j] + partial(e, j, h_);
    }
  }

  [[nodiscard]] double at(int e, double rho) const {
    const std::size_t last = f_.size() - 1;
    const double* c = &cum_[static_cast<std::size_t>(e - 1) * f_.size()];
    if (rho <= 0.0) return 0.0;
    const double x = rho / h_;
    if (x >= static_cast<double>(last)) return c[last];
    const std::size_t j = static_cast<std::size_t>(x);
    return c[j] + partial(e, j, rho - static_cast<double>(j) * h_);
  }

  // Linear interpolant of the profile, zero past the last node.
  [[nodiscard]] double interpolate(double rho) const {
    if (rho < 0.0) return 0.0;
    const double x = rho / h_;
    const std::size_t last = f_.size() - 1;
    if (x >= static_cast<double>(last)) return x == static_cast<double>(last) ? f_[last] : 0.0;
    const std::size_t j = static_cast<std::size_t>(x);
    const double w = x - static_cast<double>(j);
    return (1.0 - w) * f_[j] + w * f_[j + 1];
  }

 private:
  // int_a^{a+len} x^e (F_j + slope (x - a)) dx with a = j h, expanded in the
  // local coordinate x - a.
  [[nodiscard]] double partial(int e, std::size_t j, double len) const {
    if (len <= 0.0) return 0.0;
    const double a = static_cast<double>(j) * h_;
    const double fj = f_[j];
    const double slope = (f_[j + 1] - fj) / h_;
    double sum = 0.0;
    double binom = 1.0;
    double lp = len;
    for (int i = 0; i <= e; ++i) {
      sum += binom * ipow(a, e - i) * lp * (fj / (i + 1) + slope * len / (i + 2));
      binom = binom * (e - i) / (i + 1);
      lp *= len;
    }
    return sum;
  }

  std::vector<double> f_;
  double h_;
  int emax_;
  std::vector<double> cum_;
};

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

struct DuhamelQuadrature::Impl {
  int n;
  int m;
  int h;
  int emax;
  double ds;
  double drho;
  std::size_t nrho;
  double kap;
  std::vector<double> leg;
  std::vector<MomentTable> tables;
};

DuhamelQuadrature::DuhamelQuadrature(int n, double ds, double drho, std::size_t nrho, double kap) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("duhamel_radial: n must be odd and >= 3, got " + std::to_string(n));
  if (!(ds > 0.0) || !(drho > 0.0) || nrho < 2) throw std::invalid_argument("DuhamelQuadrature: bad quadrature grid");
  const int m = (n - 3) / 2;
  impl_ = std::make_unique<Impl>(Impl{n, m, (n - 1) / 2, n - 2, ds, drho, nrho, kap > 0.0 ? kap : kappa(n),
                                      legendre_coefficients(m), {}});
}

DuhamelQuadrature::~DuhamelQuadrature() = default;
DuhamelQuadrature::DuhamelQuadrature(DuhamelQuadrature&&) noexcept = default;
DuhamelQuadrature& DuhamelQuadrature::operator=(DuhamelQuadrature&&) noexcept = default;

void DuhamelQuadrature::append_row(std::span<const double> values) {
  std::vector<double> row(impl_->nrho, 0.0);
  std::copy_n(values.begin(), std::min(values.size(), row.size()), row.begin());
  impl_->tables.emplace_back(std::move(row), impl_->drho, impl_->emax);
}

std::size_t DuhamelQuadrature::rows() const { return impl_->tables.size(); }

double DuhamelQuadrature::value(double t, double r) const {
  const Impl& d = *impl_;
  const auto qmax = static_cast<std::size_t>(std::floor(t / d.ds + 1e-9));
  if (qmax == 0) return 0.0;
  if (d.tables.size() < qmax) throw std::logic_error("DuhamelQuadrature: forcing rows missing");
  // Expansion of P_m(mu) rho^h into powers rho^e with coefficients in (r, tau):
  // mu^j rho^h = sum_i C(j,i) A^{j-i} rho^{2i+h-j} / (2r)^j, A = r^2 - tau^2.
  double coef[16];
  double acc = 0.0;
  for (std::size_t q = 0; q < qmax; ++q) {
    const double tau = t - static_cast<double>(q) * d.ds;
    const double lo = std::abs(tau - r);
    const double hi = tau + r;
    if (hi <= lo) continue;
    const MomentTable& tab = d.tables[q];
    double inner;
    if (d.m == 0) {
      inner = tab.at(1, hi) - tab.at(1, lo);
    } else {
      std::fill(coef, coef + d.emax + 1, 0.0);
      const double A = r * r - tau * tau;
      for (int j = 0; j <= d.m; ++j) {
        const double lj = d.leg[static_cast<std::size_t>(j)];
        if (lj == 0.0) continue;
        const double scale = lj / ipow(2.0 * r, j);
        for (int i = 0; i <= j; ++i) coef[2 * i + d.h - j] += scale * binomial(j, i) * ipow(A, j - i);
      }
      inner = 0.0;
      for (int e = 1; e <= d.emax; ++e)
        if (coef[e] != 0.0) inner += coef[e] * (tab.at(e, hi) - tab.at(e, lo));
    }
    acc += (q == 0 ? 0.5 * d.ds : d.ds) * inner;
  }
  // The row at s = t has an empty interval; its half weight is omitted and
  // the q < qmax rows carry the interior trapezoid weights.
  return d.kap * acc / ipow(r, d.h);
}

double DuhamelQuadrature::axis_value(double t) const {
  const Impl& d = *impl_;
  if (d.n != 3) throw std::logic_error("DuhamelQuadrature::axis_value: only n = 3 has a closed axis limit");
  const auto qmax = static_cast<std::size_t>(std::floor(t / d.ds + 1e-9));
  if (d.tables.size() < qmax) throw std::logic_error("DuhamelQuadrature: forcing rows missing");
  // r -> 0 limit of value(): (1/r) int_{tau-r}^{tau+r} F rho drho -> 2 tau F(tau).
  double acc = 0.0;
  for (std::size_t q = 0; q < qmax; ++q) {
    const double tau = t - static_cast<double>(q) * d.ds;
    acc += (q == 0 ? 0.5 * d.ds : d.ds) * 2.0 * tau * d.tables[q].interpolate(tau);
  }
  return d.kap * acc;
}

RadialField duhamel_radial(const RadialForcing& F, int n, const Grid& grid, const DuhamelOptions& opts) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("duhamel_radial: n must be odd and >= 3, got " + std::to_string(n));
  grid.validate();
  if (opts.refine < 1) throw std::invalid_argument("duhamel_radial: refine must be >= 1");
  if (F.support() && !(F.support()->min_rho() > 0.0))
    throw std::invalid_argument("duhamel_radial: declared forcing support reaches rho = 0");

  const auto k = static_cast<std::size_t>(opts.refine);
  const double ds = grid.dt / static_cast<double>(k);
  const double drho = grid.dr / static_cast<double>(k);
  const std::size_t ns = (grid.nt - 1) * k + 1;
  const double rho_extent = grid.t_max() + grid.r_max();
  const auto nrho = static_cast<std::size_t>(std::ceil(rho_extent / drho - 1e-9)) + 2;

  const RadialField* sampled = F.field();
  const bool direct = sampled && k == 1 && sampled->grid().dt == grid.dt && sampled->grid().dr == grid.dr &&
                      sampled->grid().nt >= grid.nt;

  DuhamelQuadrature quad(n, ds, drho, nrho, opts.kappa);
  std::vector<double> vals(nrho);
  for (std::size_t q = 0; q < ns; ++q) {
    if (direct) {
      quad.append_row(sampled->row(q));
      continue;
    }
    const double s = static_cast<double>(q) * ds;
    for (std::size_t l = 0; l < nrho; ++l) vals[l] = F(s, static_cast<double>(l) * drho);
    quad.append_row(vals);
  }

  RadialField w(grid);
  const auto nt = static_cast<std::ptrdiff_t>(grid.nt);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t ii = 1; ii < nt; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 1; j < grid.nr; ++j) w(i, j) = quad.value(grid.t(i), grid.r(j));
    w(i, 0) = n == 3 ? quad.axis_value(grid.t(i)) : (4.0 * w(i, 1) - w(i, 2)) / 3.0;
  }
  return w;
}

RadialForcing cone_bump(const SupportBox& box) {
  if (!(box.s1 > box.s0) || !(box.d1 > box.d0)) throw std::invalid_argument("cone_bump: empty support box");
  const double sm = 0.5 * (box.s0 + box.s1), sh = 0.5 * (box.s1 - box.s0);
  const double dm = 0.5 * (box.d0 + box.d1), dh = 0.5 * (box.d1 - box.d0);
  auto phi = [](double x) { return std::abs(x) >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - x * x)); };
  return RadialForcing::from_function(
      [=](double s, double rho) { return rho < 0.0 ? 0.0 : phi((s - sm) / sh) * phi((s - rho - dm) / dh); }, box);
}

double calibrate_kappa(int n, const Grid& grid) {
  DuhamelOptions opts;
  opts.kappa = 1.0;
  const RadialField w1 = duhamel_radial(RadialForcing::from_function([](double, double) { return 1.0; }), n, grid, opts);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < grid.nt; ++i) {
    if (grid.t(i) < 0.5 * grid.t_max()) continue;
    for (std::size_t j = 0; j < grid.nr; ++j) {
      if (grid.r(j) < 0.25 * grid.r_max()) continue;
      sum += 0.5 * grid.t(i) * grid.t(i) / w1(i, j);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace wavelab
