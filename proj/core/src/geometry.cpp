#include "wavelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wavelab {
namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dist(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("geometry: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

constexpr double kSlack = 1e-12;

bool le(double a, double b) { return a <= b + kSlack * std::max({1.0, std::abs(a), std::abs(b)}); }

// Random orthonormal pair (e1, e2) in R^dim.
std::pair<Point, Point> random_frame(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> nd;
  Point a(static_cast<std::size_t>(dim)), b(static_cast<std::size_t>(dim));
  for (auto& v : a) v = nd(rng);
  for (auto& v : b) v = nd(rng);
  const double na = norm(a);
  for (auto& v : a) v /= na;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  for (std::size_t i = 0; i < a.size(); ++i) b[i] -= dot * a[i];
  const double nb = norm(b);
  for (auto& v : b) v /= nb;
  return {a, b};
}

// Point of norm `radius` at polar angle theta from e1 in the (e1, e2) plane.
Point in_plane(const Point& e1, const Point& e2, double radius, double theta) {
  Point p(e1.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = radius * (std::cos(theta) * e1[i] + std::sin(theta) * e2[i]);
  return p;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

bool huygens_support_check(double t, double s, std::span<const double> x, std::span<const double> y) {
  return dist(x, y) <= t - s;
}

double angle_distance(std::span<const double> x, std::span<const double> y) {
  const double nx = norm(x), ny = norm(y);
  if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("angle_distance: zero vector");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] / nx - y[i] / ny;
    s += d * d;
  }
  return std::sqrt(s);
}

IdentityCheck sphere_identity(std::span<const double> x, std::span<const double> y) {
  IdentityCheck c;
  const double d = dist(x, y);
  const double nx = norm(x), ny = norm(y);
  const double a = angle_distance(x, y);
  c.lhs = d * d;
  c.rhs = (nx - ny) * (nx - ny) + nx * ny * a * a;
  const double scale = std::max({c.lhs, c.rhs, (nx - ny) * (nx - ny), nx * ny * a * a});
  c.relative_error = scale > 0.0 ? std::abs(c.lhs - c.rhs) / scale : 0.0;
  return c;
}

double lemma22_constant(double t) {
  if (t < 20.0) throw std::invalid_argument("lemma22_constant: requires t >= 20");
  return std::sqrt(2.0 * t * t / ((t - 1.0) * (t / 10.0 - 1.0)));
}

AngleBound lemma22_angle_bound(double t, std::span<const double> x, double s, std::span<const double> y, double C) {
  const double nx = norm(x), ny = norm(y);
  if (!(t >= 20.0)) throw std::invalid_argument("lemma22: requires t >= 20");
  if (!(le(0.0, t - nx) && le(t - nx, 1.0))) throw std::invalid_argument("lemma22: requires 0 <= t-|x| <= 1");
  if (!(le(t / 10.0, s) && le(s, t))) throw std::invalid_argument("lemma22: requires t/10 <= s <= t");
  if (!(le(s - 1.0, ny) && le(ny, s))) throw std::invalid_argument("lemma22: requires s-1 <= |y| <= s");
  if (!le(dist(x, y), t - s)) throw std::invalid_argument("lemma22: (t,x,s,y) outside the kernel support");
  if (C <= 0.0) C = lemma22_constant(20.0);
  AngleBound b;
  b.angle = angle_distance(x, y);
  b.bound = C / std::sqrt(t);
  b.bound_ok = b.angle <= b.bound;
  b.identity = sphere_identity(x, y);
  return b;
}

double lemma34_constant() {
  // F1 <= 2 for delta <= 4/7; F1 >= (2t - 2|y| - 5 delta/2)/((t - delta)|y|),
  // smallest at |y| = 2, t = 5.
  const double d = kLemma34DeltaMax;
  const double f1_min = (6.0 - 2.5 * d) / (2.0 * (5.0 - d));
  const double upper = std::sqrt(2.0 * 2.5);
  const double inv_lower = 1.0 / std::sqrt(f1_min * 0.5);
  return std::max(upper, inv_lower);
}

AngleWindow lemma34_angle_window(double t, std::span<const double> x, std::span<const double> y, double delta,
                                 double C0) {
  const double nx = norm(x), ny = norm(y);
  if (!(t > 5.0)) throw std::invalid_argument("lemma34: requires t > 5");
  if (!(delta > 0.0 && delta <= kLemma34DeltaMax)) throw std::invalid_argument("lemma34: delta out of range");
  if (!(le(1.0, ny) && le(ny, 2.0))) throw std::invalid_argument("lemma34: requires 1 <= |y| <= 2");
  if (!le(std::abs(dist(x, y) - std::abs(t - ny)), 0.5 * delta))
    throw std::invalid_argument("lemma34: x not within delta/2 of the internally tangent sphere");
  if (!(le(delta, t - nx) && le(t - nx, 2.0 * delta)))
    throw std::invalid_argument("lemma34: requires delta <= t-|x| <= 2 delta");
  if (C0 <= 0.0) C0 = lemma34_constant();
  AngleWindow w;
  w.angle = angle_distance(x, y);
  w.lower = std::sqrt(delta) / C0;
  w.upper = C0 * std::sqrt(delta);
  w.in_window = w.angle >= w.lower && w.angle <= w.upper;
  w.identity = sphere_identity(x, y);
  return w;
}

std::vector<Lemma22Sample> sample_lemma22(double t, std::size_t count, std::uint64_t seed, int dim) {
  std::vector<Lemma22Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; out.size() < count; ++i) {
    auto rng = sample_rng(seed, i);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double nx = t - u01(rng);
    const double s = t / 10.0 + (t - t / 10.0) * u01(rng);
    const double ny = s - u01(rng);
    const double max_chord2 = ((t - s) * (t - s) - (nx - ny) * (nx - ny)) / (nx * ny);
    if (!(max_chord2 >= 0.0)) continue;
    // chord c = |x^ - y^| = 2 sin(theta/2); bias toward the extreme chord
    const double chord = std::min(2.0, std::sqrt(max_chord2)) * std::pow(u01(rng), 0.25);
    const double theta = 2.0 * std::asin(std::min(1.0, chord / 2.0));
    auto [e1, e2] = random_frame(rng, dim);
    Lemma22Sample smp{t, s, in_plane(e1, e2, nx, 0.0), in_plane(e1, e2, ny, theta)};
    if (dist(smp.x, smp.y) > t - s) continue;  // rounding at the extreme chord
    out.push_back(std::move(smp));
  }
  return out;
}

std::vector<Lemma34Sample> sample_lemma34(double t, double delta, std::size_t count, std::uint64_t seed, int dim) {
  std::vector<Lemma34Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; out.size() < count; ++i) {
    auto rng = sample_rng(seed, i);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double ny = 1.0 + u01(rng);
    const double nx = t - delta * (1.0 + u01(rng));
    const double target = (t - ny) + delta * (u01(rng) - 0.5);
    const double c = (nx * nx + ny * ny - target * target) / (2.0 * nx * ny);
    if (c < -1.0 || c > 1.0) continue;
    auto [e1, e2] = random_frame(rng, dim);
    Lemma34Sample smp{t, delta, in_plane(e1, e2, nx, std::acos(c)), in_plane(e1, e2, ny, 0.0)};
    if (std::abs(dist(smp.x, smp.y) - (t - ny)) > 0.5 * delta) continue;
    out.push_back(std::move(smp));
  }
  return out;
}

std::vector<Lemma34Sample> grid_lemma34(double t, double delta, std::size_t per_axis, int dim) {
  if (per_axis < 2 || dim < 2) throw std::invalid_argument("grid_lemma34: needs per_axis >= 2 and dim >= 2");
  std::vector<Lemma34Sample> out;
  const double step = 1.0 / static_cast<double>(per_axis - 1);
  std::vector<double> e1(static_cast<std::size_t>(dim), 0.0), e2 = e1;
  e1[0] = 1.0;
  e2[1] = 1.0;
  for (std::size_t a = 0; a < per_axis; ++a)
    for (std::size_t b = 0; b < per_axis; ++b)
      for (std::size_t k = 0; k < per_axis; ++k) {
        const double ny = 1.0 + a * step;
        const double nx = t - delta * (1.0 + b * step);
        const double target = (t - ny) + delta * (k * step - 0.5);
        const double c = (nx * nx + ny * ny - target * target) / (2.0 * nx * ny);
        if (c < -1.0 || c > 1.0) continue;
        Lemma34Sample smp{t, delta, in_plane(e1, e2, nx, std::acos(c)), in_plane(e1, e2, ny, 0.0)};
        if (std::abs(dist(smp.x, smp.y) - (t - ny)) > 0.5 * delta * (1.0 + 1e-12)) continue;
        out.push_back(std::move(smp));
      }
  return out;
}

double calibrate_lemma34_constant(const std::vector<Lemma34Sample>& pilot) {
  double c0 = 1.0;
  for (const auto& s : pilot) {
    const double a = angle_distance(s.x, s.y);
    const double sd = std::sqrt(s.delta);
    c0 = std::max({c0, a / sd, a > 0.0 ? sd / a : c0});
  }
  return c0;
}

}  // namespace wavelab
