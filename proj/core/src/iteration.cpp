#include "wavelab/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavelab/exponents.hpp"
#include "wavelab/fd_oracle.hpp"
#include "wavelab/norms.hpp"

namespace wavelab {

std::string to_string(IterationStatus s) {
  switch (s) {
    case IterationStatus::converged: return "converged";
    case IterationStatus::max_steps: return "max_steps";
    case IterationStatus::diverged: return "diverged";
  }
  return "unknown";
}

std::string to_string(GrowthOutcome g) {
  switch (g) {
    case GrowthOutcome::growth: return "growth";
    case GrowthOutcome::bounded: return "bounded";
    case GrowthOutcome::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Grid CauchyProblem::grid() const {
  const auto t_cells = static_cast<std::size_t>(std::llround(t_max * cells_per_unit));
  const auto r_cells = static_cast<std::size_t>(std::llround((t_max + R) * cells_per_unit));
  const double h = 1.0 / cells_per_unit;
  return {t_cells + 1, r_cells + 1, h, h};
}

CauchyProblem CauchyProblem::refined(int factor) const {
  CauchyProblem p = *this;
  p.cells_per_unit *= factor;
  return p;
}

void CauchyProblem::validate(bool require_window) const {
  if (n != 3) throw std::invalid_argument("CauchyProblem: only n = 3 is supported");
  if (!(eps >= 0.0)) throw std::invalid_argument("CauchyProblem: eps must be >= 0");
  if (!(R > 1.0)) throw std::invalid_argument("CauchyProblem: R must exceed 1");
  if (f.support > R - 1.0 + 1e-12 || g.support > R - 1.0 + 1e-12)
    throw std::invalid_argument("CauchyProblem: data support exceeds R - 1");
  if (!(nonlinearity.p > 1.0)) throw std::invalid_argument("CauchyProblem: p must be > 1");
  if (!(t_max > 0.0) || cells_per_unit < 2) throw std::invalid_argument("CauchyProblem: bad truncation");
  const double tc = t_max * cells_per_unit, rc = (t_max + R) * cells_per_unit;
  if (std::abs(tc - std::round(tc)) > 1e-9 || std::abs(rc - std::round(rc)) > 1e-9)
    throw std::invalid_argument("CauchyProblem: t_max and R must be multiples of the grid step");
  if (require_window) {
    const WeightWindow w = weight_window(n, nonlinearity.p);
    if (!w.contains(gamma))
      throw std::invalid_argument("CauchyProblem: gamma outside the open weight window (" + std::to_string(w.lower) +
                                  ", " + std::to_string(w.upper) + ")");
  }
}

double iteration_norm(const RadialField& u, const CauchyProblem& prob) {
  return weighted_norm(u, {prob.gamma, prob.R, prob.p() + 1.0}, Region::everything(), prob.n);
}

namespace {

// F_p(u) restricted to the domain of dependence r <= t + R - 1.
RadialField nonlinear_forcing(const RadialField& u, const CauchyProblem& prob) {
  const Grid& g = u.grid();
  RadialField F(g);
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double edge = g.t(i) + prob.R - 1.0 + 1e-12;
    for (std::size_t j = 0; j < g.nr && g.r(j) <= edge; ++j) F(i, j) = prob.nonlinearity(u(i, j));
  }
  return F;
}

double lebesgue_norm(const RadialField& u, double q) {
  return weighted_norm(u, {0.0, 0.0, q}, Region::everything(), 3);
}

double support_leak(const RadialField& u, double R) {
  const Grid& g = u.grid();
  const double top = u.max_abs();
  if (top == 0.0) return 0.0;
  double leak = 0.0;
  for (std::size_t i = 0; i < g.nt; ++i)
    for (std::size_t j = 0; j < g.nr; ++j)
      if (g.r(j) > g.t(i) + R - 1.0 + g.dr + 1e-12) leak = std::max(leak, std::abs(u(i, j)));
  return leak / top;
}

}  // namespace

Residual fixed_point_residual(const RadialField& u, const CauchyProblem& prob) {
  const Grid& g = u.grid();
  const RadialField box = dalembertian_n3(u);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < g.nt; ++i) {
    for (std::size_t j = 1; j + 1 < g.nr; ++j) {
      const double r = g.r(j);
      if (r >= g.t(i) + prob.R - 1.0) continue;
      const double F = prob.nonlinearity(u(i, j));
      const double w = r * r * g.dt * g.dr;
      num += w * (box(i, j) - F) * (box(i, j) - F);
      den += w * F * F;
    }
  }
  Residual res;
  res.absolute = std::sqrt(num);
  res.relative = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return res;
}

PicardResult picard_iterate(const CauchyProblem& prob, const IterationOptions& opts) {
  prob.validate(opts.require_window);
  if (opts.max_steps < 0) throw std::invalid_argument("picard_iterate: max_steps must be >= 0");
  const Grid grid = prob.grid();
  const RadialField u0 = free_radial_n3(prob.f, prob.g, prob.eps, prob.R, grid).field;
  const double q_dual = (prob.p() + 1.0) / prob.p();

  PicardResult res;
  IterationTrace& tr = res.trace;
  const double A0 = iteration_norm(u0, prob);
  tr.A.push_back(A0);
  tr.B.push_back(A0);
  if (opts.keep_iterates) res.iterates.push_back(u0);

  RadialField prev = u0;
  RadialField F_prev = nonlinear_forcing(prev, prob);
  tr.status = IterationStatus::max_steps;
  if (A0 == 0.0) tr.status = IterationStatus::converged;

  for (int m = 1; m <= opts.max_steps && tr.status != IterationStatus::converged; ++m) {
    RadialField um = u0 + duhamel_radial(RadialForcing::from_field(F_prev), prob.n, grid);
    RadialField F_cur = nonlinear_forcing(um, prob);
    const double Am = iteration_norm(um, prob);
    const double Bm = iteration_norm(um - prev, prob);
    tr.A.push_back(Am);
    tr.B.push_back(Bm);
    tr.ratios.push_back(tr.B[tr.B.size() - 2] > 0.0 ? Bm / tr.B[tr.B.size() - 2] : 0.0);
    tr.fp_diff.push_back(lebesgue_norm(F_cur - F_prev, q_dual));
    tr.steps = m;
    if (opts.keep_iterates) res.iterates.push_back(um);
    prev = std::move(um);
    F_prev = std::move(F_cur);
    if (!std::isfinite(Am) || Am > opts.divergence_factor * A0) {
      tr.status = IterationStatus::diverged;
      break;
    }
    if (Bm < opts.tol * A0) tr.status = IterationStatus::converged;
  }

  for (std::size_t m = 0; m < tr.A.size(); ++m) {
    if (tr.A[m] > 2.0 * A0) tr.lemma_bounds = false;
    if (m + 1 < tr.B.size() && 2.0 * tr.B[m + 1] > tr.B[m]) tr.lemma_bounds = false;
  }
  const Residual r = fixed_point_residual(prev, prob);
  tr.residual = r.absolute;
  tr.residual_relative = r.relative;
  tr.support_leak = support_leak(prev, prob.R);
  res.u = std::move(prev);
  res.u.set_support_radius(prob.R);
  return res;
}

RefinementStudy refinement_study(const CauchyProblem& prob, int levels, const IterationOptions& opts) {
  if (levels < 2) throw std::invalid_argument("refinement_study: need at least two levels");
  RefinementStudy st;
  for (int k = 0; k < levels; ++k) {
    const CauchyProblem pk = prob.refined(1 << k);
    const PicardResult r = picard_iterate(pk, opts);
    st.cells_per_unit.push_back(pk.cells_per_unit);
    st.residuals.push_back(r.trace.residual);
    if (k > 0 && !(st.residuals[k] < st.residuals[k - 1])) st.resolution_failure = true;
  }
  const double a = st.residuals[st.residuals.size() - 2], b = st.residuals.back();
  st.order = (a > 0.0 && b > 0.0) ? std::log2(a / b) : 0.0;
  return st;
}

double fit_contraction_constant(const IterationTrace& trace, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("contraction fit: p must be > 1");
  const double A0 = trace.A.empty() ? 0.0 : trace.A[0];
  double K = 0.0;
  for (std::size_t m = 0; m + 1 < trace.B.size(); ++m) {
    if (!(trace.B[m] > 0.0) || trace.B[m + 1] < 1e-10 * A0) continue;
    const double a_sum = trace.A[m] + (m == 0 ? 0.0 : trace.A[m - 1]);
    K = std::max(K, trace.B[m + 1] / (std::pow(a_sum, p - 1.0) * trace.B[m]));
  }
  return K;
}

ContractionFit contraction_constant_check(const IterationTrace& first, const IterationTrace& second, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("contraction_constant_check: p must be > 1");
  if (first.status == IterationStatus::diverged || second.status == IterationStatus::diverged)
    throw std::invalid_argument("contraction_constant_check: both runs must converge");
  ContractionFit fit;
  fit.constant_a = fit_contraction_constant(first, p);
  fit.constant_b = fit_contraction_constant(second, p);
  fit.ratio = fit.constant_a > 0.0 ? fit.constant_b / fit.constant_a : 0.0;
  fit.a0_ratio = first.A[0] > 0.0 ? second.A[0] / first.A[0] : 0.0;
  fit.consistent = fit.ratio >= 0.5 && fit.ratio <= 2.0;
  return fit;
}

bool contracts(const IterationTrace& trace) {
  if (trace.status == IterationStatus::diverged) return false;
  for (std::size_t m = 0; m + 1 < trace.B.size(); ++m)
    if (2.0 * trace.B[m + 1] > trace.B[m]) return false;
  return true;
}

ThresholdResult epsilon_threshold_search(const CauchyProblem& templ, double eps_lo, double eps_hi, double resolution,
                                         const IterationOptions& opts) {
  if (!(eps_hi > eps_lo) || eps_lo < 0.0) throw std::invalid_argument("epsilon_threshold_search: bad range");
  if (!(resolution > 0.0)) throw std::invalid_argument("epsilon_threshold_search: resolution must be positive");
  ThresholdResult res;
  auto ok = [&](double eps) {
    CauchyProblem p = templ;
    p.eps = eps;
    ++res.evaluations;
    return contracts(picard_iterate(p, opts).trace);
  };
  const bool lo_ok = ok(eps_lo);
  const bool hi_ok = ok(eps_hi);
  if (lo_ok == hi_ok) {
    res.monotone_regime = true;
    res.lo = res.hi = res.estimate = hi_ok ? eps_hi : eps_lo;
    return res;
  }
  double lo = eps_lo, hi = eps_hi;
  while (hi - lo > resolution * eps_hi) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  res.lo = lo;
  res.hi = hi;
  res.estimate = 0.5 * (lo + hi);
  return res;
}

MarchResult march_integral_equation(const CauchyProblem& prob, double overflow) {
  const Grid grid = prob.grid();
  const RadialField u0 = free_radial_n3(prob.f, prob.g, prob.eps, prob.R, grid).field;
  const auto nrho = static_cast<std::size_t>(std::ceil((grid.t_max() + grid.r_max()) / grid.dr - 1e-9)) + 2;
  DuhamelQuadrature quad(prob.n, grid.dt, grid.dr, nrho);

  MarchResult out{RadialField(grid), false, 0.0};
  std::vector<double> forcing(grid.nr);
  auto push_row = [&](std::size_t i) {
    const double edge = grid.t(i) + prob.R - 1.0 + 1e-12;
    for (std::size_t j = 0; j < grid.nr; ++j) forcing[j] = grid.r(j) <= edge ? prob.nonlinearity(out.u(i, j)) : 0.0;
    quad.append_row(forcing);
  };
  for (std::size_t j = 0; j < grid.nr; ++j) out.u(0, j) = u0(0, j);
  push_row(0);
  for (std::size_t i = 1; i < grid.nt; ++i) {
    const double t = grid.t(i);
    bool bad = false;
    for (std::size_t j = 1; j < grid.nr; ++j) {
      const double v = u0(i, j) + quad.value(t, grid.r(j));
      out.u(i, j) = v;
      if (!std::isfinite(v) || std::abs(v) > overflow) bad = true;
    }
    out.u(i, 0) = u0(i, 0) + (4.0 * (out.u(i, 1) - u0(i, 1)) - (out.u(i, 2) - u0(i, 2))) / 3.0;
    if (bad || !std::isfinite(out.u(i, 0))) {
      out.nonfinite = true;
      for (std::size_t k = i; k < grid.nt; ++k)
        for (std::size_t j = 0; j < grid.nr; ++j) out.u(k, j) = 0.0;
      return out;
    }
    out.t_stop = t;
    push_row(i);
  }
  return out;
}

BlowupResult blowup_indicator(const CauchyProblem& prob, const BlowupOptions& opts, bool allow_supercritical) {
  prob.validate(false);
  if (!allow_supercritical && !(prob.p() < critical_power(prob.n)))
    throw std::invalid_argument("blowup_indicator: requires p < p_c");
  if (opts.windows < 2) throw std::invalid_argument("blowup_indicator: need at least two windows");

  BlowupResult res;
  const MarchResult m = march_integral_equation(prob, opts.overflow);
  res.nonfinite = m.nonfinite;
  res.t_stop = m.t_stop;
  const WeightSpec ws{prob.gamma, prob.R, prob.p() + 1.0};
  for (int k = 0; k < opts.windows; ++k) {
    const double T = prob.t_max / std::ldexp(1.0, opts.windows - 1 - k);
    Region reg;
    reg.id = "window";
    reg.t_hi = T;
    res.windows.push_back(T);
    res.norms.push_back(weighted_norm(m.u, ws, reg, prob.n));
  }
  const double first = res.norms.front(), last = res.norms.back();
  const double prev = res.norms[res.norms.size() - 2];
  if (first == 0.0 && last == 0.0) {
    res.outcome = GrowthOutcome::bounded;
  } else if (m.nonfinite || last > opts.growth_factor * first) {
    res.outcome = GrowthOutcome::growth;
  } else if (last <= (1.0 + opts.bounded_increment) * prev) {
    res.outcome = GrowthOutcome::bounded;
  } else {
    res.outcome = GrowthOutcome::inconclusive;
  }
  res.growth_flag = res.outcome == GrowthOutcome::growth;
  return res;
}

JohnRatio john_pointwise_check(const RadialField& w, const RadialField& F, double p) {
  if (!(p > 1.0 + std::sqrt(2.0)) || p > 3.0) throw std::invalid_argument("john_pointwise_check: p must lie in (1+sqrt2, 3]");
  const Grid& g = w.grid();
  if (!(g == F.grid())) throw std::invalid_argument("john_pointwise_check: grid mismatch");
  JohnRatio jr;
  for (std::size_t i = 0; i < g.nt; ++i) {
    const double t = g.t(i);
    for (std::size_t j = 0; j < g.nr; ++j) {
      const double d = t - g.r(j);
      if (d <= 1.0 && F(i, j) != 0.0)
        throw std::invalid_argument("john_pointwise_check: forcing must vanish where t - r <= 1");
      if (d <= 0.0) continue;
      jr.numerator = std::max(jr.numerator, t * std::pow(d, p - 2.0) * std::abs(w(i, j)));
      jr.denominator = std::max(jr.denominator, std::pow(t, p) * std::pow(d, p * (p - 2.0)) * std::abs(F(i, j)));
    }
  }
  jr.defined = jr.denominator > 0.0;
  jr.ratio = jr.defined ? jr.numerator / jr.denominator : std::numeric_limits<double>::quiet_NaN();
  return jr;
}

RadialField john_forcing(const Grid& grid, double p) {
  auto chi = [](double d) {
    if (d <= 1.0) return 0.0;
    if (d >= 2.0) return 1.0;
    const double a = std::exp(-1.0 / (d - 1.0)), b = std::exp(-1.0 / (2.0 - d));
    return a / (a + b);
  };
  return RadialField::sample(grid, [&](double t, double r) {
    const double d = t - r;
    return d <= 1.0 ? 0.0 : chi(d) * std::pow(t, -p) * std::pow(d, -p * (p - 2.0));
  });
}

}  // namespace wavelab
