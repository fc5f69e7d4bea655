#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wavelab {

using Point = std::vector<double>;

// Closed support of the forward fundamental solution: |x - y| <= t - s.
bool huygens_support_check(double t, double s, std::span<const double> x, std::span<const double> y);

// |x/|x| - y/|y||.
double angle_distance(std::span<const double> x, std::span<const double> y);

struct IdentityCheck {
  double lhs = 0.0;  // |x - y|^2
  double rhs = 0.0;  // (|x| - |y|)^2 + |x||y| |x/|x| - y/|y||^2
  double relative_error = 0.0;
};

IdentityCheck sphere_identity(std::span<const double> x, std::span<const double> y);

// Uniform constant for the tangent-sphere angle bound, valid for t >= t_min >= 20:
//   angle^2 <= (t-|x|)(t+|x|)/(|x||y|) <= 2t / ((t-1)(t/10-1)),
// so C(t)^2 = 2t^2/((t-1)(t/10-1)), decreasing in t.
double lemma22_constant(double t);

struct AngleBound {
  double angle = 0.0;
  double bound = 0.0;  // C / sqrt(t)
  bool bound_ok = false;
  IdentityCheck identity;
};

// Requires 0 <= t-|x| <= 1, t/10 <= s <= t, s-1 <= |y| <= s, |x-y| <= t-s, t >= 20.
// C defaults to lemma22_constant(20). Throws std::invalid_argument otherwise.
AngleBound lemma22_angle_bound(double t, std::span<const double> x, double s, std::span<const double> y,
                               double C = 0.0);

// Largest delta accepted by the internal-tangency window.
inline constexpr double kLemma34DeltaMax = 0.1;

// Admissible C0 for t > 5, 1 <= |y| <= 2, delta <= kLemma34DeltaMax, from
// angle^2 = F1 * F2 with F1 = (|x-y|+|x|-|y|)/(|x||y|) bounded in
// [(2t-2|y|-5 delta/2)/((t-delta)|y|), 2] and F2 = |x-y|-|x|+|y| in [delta/2, 5 delta/2].
double lemma34_constant();

struct AngleWindow {
  double angle = 0.0;
  double lower = 0.0;  // sqrt(delta) / C0
  double upper = 0.0;  // C0 sqrt(delta)
  bool in_window = false;
  IdentityCheck identity;
};

// Requires t > 5, 1 <= |y| <= 2, ||x-y| - (t-|y|)| <= delta/2, delta <= t-|x| <= 2 delta,
// 0 < delta <= kLemma34DeltaMax. C0 defaults to lemma34_constant().
AngleWindow lemma34_angle_window(double t, std::span<const double> x, std::span<const double> y, double delta,
                                 double C0 = 0.0);

// Random admissible configurations in R^dim for the two lemmas. Each sample
// i is drawn from its own generator seeded with (seed, i).
struct Lemma22Sample {
  double t, s;
  Point x, y;
};
struct Lemma34Sample {
  double t, delta;
  Point x, y;
};
std::vector<Lemma22Sample> sample_lemma22(double t, std::size_t count, std::uint64_t seed, int dim = 3);
std::vector<Lemma34Sample> sample_lemma34(double t, double delta, std::size_t count, std::uint64_t seed, int dim = 3);

// Deterministic pilot: per_axis^3 configurations spanning the sampler's
// parameter box (|y|, t-|x|, |x-y| - (t-|y|)), corners included.
std::vector<Lemma34Sample> grid_lemma34(double t, double delta, std::size_t per_axis, int dim = 3);

// Largest angle/sqrt(delta) and sqrt(delta)/angle over a pilot sample.
double calibrate_lemma34_constant(const std::vector<Lemma34Sample>& pilot);

}  // namespace wavelab
