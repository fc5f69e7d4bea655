// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.
// Expected values come from closed forms or the finite-difference oracle, never
// from the code path under test.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wavelab/exponents.hpp"
#include "wavelab/fd_oracle.hpp"
#include "wavelab/geometry.hpp"
#include "wavelab/inequality_lab.hpp"
#include "wavelab/iteration.hpp"
#include "wavelab/overlap.hpp"
#include "wavelab/radial_kernel.hpp"

using namespace wavelab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];
template <class... A>
std::string say(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// Closed-form Strauss root, independent of critical_power's implementation.
double strauss_root(int n) {
  const double a = n - 1.0, b = -(n + 1.0), c = -2.0;
  return (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
}

double rel_l2(const RadialField& a, const RadialField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    num += std::pow(a.values()[k] - b.values()[k], 2);
    den += std::pow(b.values()[k], 2);
  }
  return std::sqrt(num / den);
}

// sup_t |w - exact(t)| / sup |exact| over the grid.
double rel_sup(const RadialField& w, const std::function<double(double)>& exact) {
  const Grid& g = w.grid();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.nt; ++i)
    for (std::size_t j = 0; j < g.nr; ++j) {
      num = std::max(num, std::abs(w(i, j) - exact(g.t(i))));
      den = std::max(den, std::abs(exact(g.t(i))));
    }
  return num / den;
}

Outcome c1_exponents() {
  const double e3 = std::abs(critical_power(3) - (1.0 + std::sqrt(2.0)));
  const double e4 = std::abs(critical_power(4) - 2.0);
  double worst = 0.0, worst_root = 0.0;
  for (int n = 2; n <= 20; ++n) {
    const double p = critical_power(n);
    worst = std::max(worst, std::abs((n - 1) * p * p - (n + 1) * p - 2));
    worst_root = std::max(worst_root, std::abs(p - strauss_root(n)));
  }
  return {e3 <= 1e-12 && e4 <= 1e-12 && worst <= 1e-12 && worst_root <= 1e-12,
          say("|p_c(3)-(1+sqrt2)|=%.1e |p_c(4)-2|=%.1e max residual n=2..20 %.1e", e3, e4, worst)};
}

Outcome c2_window() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nd(2, 20);
  std::uniform_real_distribution<double> pd(1.0, 5.0);
  int mismatches = 0, nonempty = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = nd(rng);
    double p = pd(rng);
    while (p == 1.0) p = pd(rng);
    const bool ne = weight_window(n, p).nonempty();
    nonempty += ne;
    if (ne != (p > strauss_root(n))) ++mismatches;
  }
  return {mismatches == 0, say("%d mismatches over 1000 draws (%d nonempty)", mismatches, nonempty)};
}

Outcome c3_kernel() {
  const Grid g = Grid::from_extent(2.0, 200, 2.0, 200);
  const auto w = duhamel_radial(RadialForcing::from_function([](double, double) { return 1.0; }), 3, g);
  const double err = rel_sup(w, [](double t) { return t * t / 2; });
  // F = 1 is reproduced to roundoff, so the order is measured on F = s^2 (w = t^4/12).
  std::vector<double> errs;
  for (std::size_t cells : {50, 100, 200}) {
    const Grid gs = Grid::from_extent(2.0, cells, 2.0, cells);
    const auto ws = duhamel_radial(RadialForcing::from_function([](double s, double) { return s * s; }), 3, gs);
    errs.push_back(rel_sup(ws, [](double t) { return std::pow(t, 4) / 12; }));
  }
  const double order = std::log2(errs[1] / errs[2]);
  const double order0 = std::log2(errs[0] / errs[1]);
  return {kappa(3) == 0.5 && err <= 1e-3 && order >= 1.8 && order0 >= 1.8,
          say("kappa=%.3g rel sup err (F=1, 200x200) %.2e; F=s^2 errors %.2e %.2e %.2e, order %.3f", kappa(3), err,
              errs[0], errs[1], errs[2], order)};
}

Outcome c4_oracle() {
  const SupportBox box{1.0, 2.0, 0.25, 0.5};
  const auto F = cone_bump(box);
  std::vector<double> errs;
  for (std::size_t cells : {100, 200, 400}) {
    const Grid g = Grid::from_extent(3.0, cells, 3.0, cells);
    const auto w = duhamel_radial(F, 3, g);
    const auto fd = fd_radial_solve(3, [](double) { return 0.0; }, [](double) { return 0.0; },
                                    [&](double s, double r) { return F(s, r); }, g, {4, 1.0});
    errs.push_back(rel_l2(w, fd));
  }
  return {errs[2] <= 1e-2 && errs[1] < errs[0] && errs[2] < errs[1],
          say("relative L2 vs FD oracle: %.2e (100) %.2e (200) %.2e (400x400)", errs[0], errs[1], errs[2])};
}

CauchyProblem base_problem(double eps, double t_max, int cpu) {
  CauchyProblem pb;
  pb.eps = eps;
  pb.nonlinearity = Nonlinearity::absolute(2.5);
  pb.gamma = weight_window(3, 2.5).midpoint();
  pb.t_max = t_max;
  pb.cells_per_unit = cpu;
  return pb;
}

Outcome c5_residual() {
  const auto pb = base_problem(0.1, 6.0, 8);
  const auto r = picard_iterate(pb);
  const auto st = refinement_study(pb, 3);
  const bool ok = r.trace.status == IterationStatus::converged && contracts(r.trace) && !st.resolution_failure &&
                  st.residuals[1] < st.residuals[0] && st.residuals[2] < st.residuals[1] && st.order >= 1.0;
  return {ok, say("eps=0.1 residuals %.2e %.2e %.2e at 8/16/32 cells per unit, order %.3f", st.residuals[0],
                  st.residuals[1], st.residuals[2], st.order)};
}

Outcome c6_contraction() {
  std::string found;
  double tail_worst = 0.0;
  for (double eps : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
    const auto pb = base_problem(eps, 10.0, 8);
    IterationOptions o;
    o.tol = 0.0;  // compute every step up to m = 7
    o.max_steps = 7;
    o.keep_iterates = true;
    const auto r = picard_iterate(pb, o);
    const auto& tr = r.trace;
    bool ok = tr.B.size() >= 8;
    for (std::size_t m = 0; ok && m + 1 < tr.B.size() && m <= 6; ++m) ok = 2 * tr.B[m + 1] <= tr.B[m];
    for (double a : tr.A) ok = ok && a <= 2 * tr.A[0];
    if (!ok) continue;
    // Geometric tail ||u_M - u_{M+k}|| <= 2^{1-M} B_0 with 20% slack.
    const std::size_t last = r.iterates.size() - 1;
    double worst = 0.0;
    for (std::size_t M = 1; M < last; ++M)
      for (std::size_t k = 1; M + k <= last; ++k)
        worst = std::max(worst, iteration_norm(r.iterates[M] - r.iterates[M + k], pb) /
                                    std::ldexp(tr.B[0], 1 - static_cast<int>(M)));
    tail_worst = std::max(tail_worst, worst);
    if (worst <= 1.2) found += (found.empty() ? "" : ",") + say("%g", eps);
  }
  return {!found.empty(), "contracting eps in ladder {0.05..2}: " + (found.empty() ? "none" : found) +
                              say("; worst tail ratio %.3g (<= 1.2)", tail_worst)};
}

Outcome c7_blowup() {
  std::string detail;
  bool ok = true;
  for (int cpu : {5, 10}) {
    CauchyProblem pb;
    pb.eps = 0.1;
    pb.gamma = 0.0;
    pb.t_max = 50.0;
    pb.cells_per_unit = cpu;
    pb.nonlinearity = Nonlinearity::absolute(1.5);
    const auto sub = blowup_indicator(pb);
    pb.nonlinearity = Nonlinearity::absolute(2.5);
    const auto sup = blowup_indicator(pb, {}, true);
    ok = ok && sub.growth_flag && !sup.growth_flag;
    detail += say("%s%d cells/unit: p=1.5 %s, p=2.5 %s", detail.empty() ? "" : "; ", cpu, to_string(sub.outcome).c_str(),
                  to_string(sup.outcome).c_str());
  }
  return {ok, detail};
}

Outcome c8_inequality() {
  const KernelParams adm{-0.125, 0.125, 0.5, 4.0 / 3.0, 4.0};
  FamilySpec fs;
  fs.count = 200;
  fs.seed = 7;
  double s16 = 0.0, s32 = 0.0;
  for (double L : {16.0, 32.0}) {
    std::vector<GridFunction1D> fam;
    for (std::size_t i = 0; i < fs.count; ++i) fam.push_back(family_member(fs, i, L, static_cast<std::size_t>(L * 32)));
    (L == 16.0 ? s16 : s32) = ratio_1d(fam, adm).sup_ratio;
  }
  const double change = std::abs(s32 / s16 - 1.0);
  const KernelParams bad{-0.25, 0.25, 0.5, 4.0 / 3.0, 4.0};  // alpha + gamma = 1/q
  std::vector<double> sups;
  for (double L : {16.0, 32.0, 64.0, 128.0}) {
    const auto n = static_cast<std::size_t>(L * 32);
    std::vector<GridFunction1D> fam;
    for (double d : {0.5, 0.25, 0.125}) fam.push_back(adversarial_member(L, n, bad.p, d, 1.0 / 32));
    sups.push_back(ratio_1d(fam, bad).sup_ratio);
  }
  const bool grows = sups[1] > sups[0] && sups[2] > sups[1] && sups[3] > sups[2];
  return {adm.admissible() && !bad.admissible() && change < 0.05 && grows,
          say("admissible sup %.4f -> %.4f (%.2f%%); boundary set %.4f %.4f %.4f %.4f", s16, s32, 100 * change, sups[0],
              sups[1], sups[2], sups[3])};
}

Outcome c9_domination() {
  const KernelParams adm{-0.125, 0.125, 0.5, 4.0 / 3.0, 4.0};
  const auto ok = kernel_domination_2d(1000000, adm, 9);
  KernelParams neg = adm;
  neg.gamma = -0.5;
  const auto bad = kernel_domination_2d(1000000, neg, 9);
  return {ok.violations == 0 && bad.violations > 0,
          say("admissible: %zu violations / %zu; gamma=-1/2: %zu violations", ok.violations, ok.samples, bad.violations)};
}

Outcome c10_overlap() {
  std::size_t fails = 0;
  double min_slack = INFINITY;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto op = s % 2 ? BandedBlockOperator::random(2, 8, 4, 2, s, 0.3) : BandedBlockOperator::random(1, 64, 8, 2, s, 0.3);
    const auto r = overlap_bound(op);
    if (!r.holds || !r.exact) ++fails;
    min_slack = std::min(min_slack, r.slack);
  }
  bool exact = true;
  std::string slacks;
  for (int d : {1, 2})
    for (std::size_t C : {1, 2, 3}) {
      const auto r = overlap_bound(BandedBlockOperator::random(d, 1, 8, C, 11));
      exact = exact && r.slack == std::pow(2.0 * C + 1.0, d);
      slacks += say("%s%g", slacks.empty() ? "" : ",", r.slack);
    }
  return {fails == 0 && exact, say("%zu of 100 instances fail, min slack %.3g; single-block slacks ", fails, min_slack) + slacks};
}

Outcome c11_geometry() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double sx = std::exp(3 * nd(rng)), sy = std::exp(3 * nd(rng));
    Point x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = sx * nd(rng);
      y[i] = sy * nd(rng);
    }
    // Oracle: |x-y|^2 straight from coordinates.
    double lhs = 0.0;
    for (int i = 0; i < 3; ++i) lhs += (x[i] - y[i]) * (x[i] - y[i]);
    const auto id = sphere_identity(x, y);
    worst = std::max({worst, id.relative_error, std::abs(id.lhs - lhs) / lhs});
  }
  std::size_t f22 = 0;
  for (const auto& s : sample_lemma22(100.0, 10000, 12))
    if (!lemma22_angle_bound(s.t, s.x, s.s, s.y).bound_ok) ++f22;
  const double c0 = calibrate_lemma34_constant(grid_lemma34(10.0, 0.01, 11));
  std::size_t f34 = 0;
  for (const auto& s : sample_lemma34(10.0, 0.01, 10000, 13))
    if (!lemma34_angle_window(s.t, s.x, s.y, s.delta, c0 * 1.01).in_window) ++f34;
  return {worst <= 1e-12 && f22 == 0 && f34 == 0,
          say("identity rel err %.1e on 1e5; tangent-sphere C=%.4f: %zu/10000 fail; calibrated C0=%.4f: %zu/10000 miss",
              worst, lemma22_constant(20.0), f22, c0, f34)};
}

double john(double T, int cpu) {
  const auto cells = static_cast<std::size_t>(T * cpu);
  const Grid g = Grid::from_extent(T, cells, T, cells);
  const auto F = john_forcing(g, 2.6);
  return john_pointwise_check(duhamel_radial(RadialForcing::from_field(F), 3, g), F, 2.6).ratio;
}

Outcome c12_john() {
  const double a = john(40.0, 4), b = john(40.0, 8);
  const double agree = std::abs(b / a - 1.0);
  const double r40 = john(40.0, 2), r80 = john(80.0, 2), r160 = john(160.0, 2);
  const double d1 = r80 - r40, d2 = r160 - r80;
  const double q = d2 / d1;
  const double limit = r160 + d2 * d2 / (d1 - d2);
  const bool bounded = std::isfinite(r160) && d1 > 0.0 ? q <= 0.9 : std::abs(d2) <= std::abs(d1);
  return {agree <= 0.1 && bounded && std::isfinite(limit),
          say("T=40: %.4f (4/unit) vs %.4f (8/unit), %.2f%%; T=40,80,160: %.4f %.4f %.4f, increment ratio %.3f, "
              "extrapolated limit %.3f",
              a, b, 100 * agree, r40, r80, r160, q, limit)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*fn)();
  };
  const Criterion all[] = {
      {"exponent exactness", c1_exponents}, {"window dichotomy", c2_window},
      {"kernel calibration", c3_kernel},    {"oracle equivalence", c4_oracle},
      {"fixed-point residual", c5_residual}, {"contraction property", c6_contraction},
      {"dichotomy experiment", c7_blowup},  {"1D inequality", c8_inequality},
      {"2D domination", c9_domination},     {"overlap bound", c10_overlap},
      {"geometry", c11_geometry},           {"John check", c12_john},
  };
  int failures = 0, k = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %2d %-22s %s  [%.2fs]\n", o.pass ? "PASS" : "FAIL", ++k, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", k - failures, k);
  return failures;
}
