#include "nlpm/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace nlpm {

namespace {

// Exponent of the desingularizing substitution psi = Phi^q / q.
double subst_exponent(const BarrierParams& bp) {
  return bp.regime == Regime::Clogged ? 1.0 + bp.m : 1.0 - bp.m;
}

double phi_of_psi(double psi, double q) {
  return psi <= 0.0 ? 0.0 : std::pow(q * psi, 1.0 / q);
}

// One classical RK4 step of psi' = C (mass - Phi(psi)).
double rk4_step(double psi, double dt, double C, double mass, double q) {
  auto rhs = [&](double p) { return C * (mass - phi_of_psi(p, q)); };
  const double k1 = rhs(psi);
  const double k2 = rhs(psi + 0.5 * dt * k1);
  const double k3 = rhs(psi + 0.5 * dt * k2);
  const double k4 = rhs(psi + dt * k3);
  return psi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advance psi from t0 to t1 with `sub` RK4 steps. When the interval starts
// at t = 0 the solution behaves like t^{1/q} and uniform steps lose accuracy,
// so the nodes are graded cubically toward the left endpoint; the cubic map
// t = t1 * tau^3 renders the leading fractional powers smooth for the
// exponents q = 1 -+ m that occur here.
double integrate_interval(double psi, double t0, double t1, int sub, double C, double mass,
                          double q) {
  const bool graded = t0 == 0.0;
  double t_prev = t0;
  for (int j = 1; j <= sub; ++j) {
    const double frac = static_cast<double>(j) / sub;
    const double t_next = graded ? t1 * frac * frac * frac : t0 + (t1 - t0) * frac;
    psi = rk4_step(psi, t_next - t_prev, C, mass, q);
    t_prev = t_next;
  }
  return psi;
}

}  // namespace

double BarrierCurve::at(double t) const {
  if (times.empty()) return 0.0;
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[i - 1], t1 = times[i];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * values[i - 1] + w * values[i];
}

BarrierCurve solve_barrier(const BarrierParams& bp, double t_end, int n_points,
                           int substeps_per_point) {
  if (!(t_end > 0.0)) throw validation_error("solve_barrier: t_end must be > 0");
  if (n_points < 2) throw validation_error("solve_barrier: n_points must be >= 2");
  if (bp.regime == Regime::FastDiffusion && !(bp.m > 0.0 && bp.m < 1.0))
    throw validation_error("solve_barrier: fast-diffusion requires m in (0,1)");
  if (bp.phi0 < 0.0 || bp.phi0 > bp.mass)
    throw validation_error("solve_barrier: require 0 <= phi0 <= mass");

  const double q = subst_exponent(bp);
  double psi = std::pow(bp.phi0, q) / q;
  BarrierCurve curve;
  curve.times.reserve(n_points);
  curve.values.reserve(n_points);
  curve.times.push_back(0.0);
  curve.values.push_back(bp.phi0);
  const double dt_out = t_end / (n_points - 1);
  for (int i = 1; i < n_points; ++i) {
    psi = integrate_interval(psi, (i - 1) * dt_out, i * dt_out, substeps_per_point, bp.C, bp.mass,
                             q);
    curve.times.push_back(i * dt_out);
    curve.values.push_back(std::min(phi_of_psi(psi, q), bp.mass));
  }
  return curve;
}

namespace {

double envelope_shape(const BarrierParams& bp, double t) {
  const double q = subst_exponent(bp);
  return std::min(std::pow(bp.mass * t, 1.0 / q), bp.mass * (1.0 - std::exp(-bp.C * t)));
}

}  // namespace

double envelope_prefactor(const BarrierParams& bp) {
  const double q = subst_exponent(bp);
  // Candidate from the t -> 0 leading balance Phi ~ (q C mass t)^{1/q}.
  double pref = std::pow(q * bp.C, 1.0 / q);
  // Scan a log-spaced grid covering the crossover and the saturation regime.
  const double t_lo = 1e-4 / bp.C, t_hi = 50.0 / bp.C;
  const int n = 4000;
  double psi = std::pow(bp.phi0, q) / q;
  double t = 0.0;
  std::vector<double> ratios(n, pref);
  for (int i = 0; i < n; ++i) {
    const double t_next = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n - 1));
    psi = integrate_interval(psi, t, t_next, i == 0 ? 64 : 8, bp.C, bp.mass, q);
    t = t_next;
    const double shape = envelope_shape(bp, t);
    if (shape > 0.0) ratios[i] = phi_of_psi(psi, q) / shape;
  }
  int imin = 0;
  for (int i = 1; i < n; ++i)
    if (ratios[i] < ratios[imin]) imin = i;
  pref = std::min(pref, ratios[imin]);
  // Parabolic refinement in log t around the grid minimum: the true minimum
  // of the smooth ratio sits slightly below the sampled one.
  if (imin > 0 && imin < n - 1) {
    const double y0 = ratios[imin - 1], y1 = ratios[imin], y2 = ratios[imin + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom > 0.0) {
      const double delta = 0.5 * (y0 - y2) / denom;  // vertex offset in grid units
      pref = std::min(pref, y1 - 0.25 * (y0 - y2) * delta);
    }
  }
  return pref;
}

double barrier_envelope(const BarrierParams& bp, double t) {
  if (t <= 0.0) return 0.0;
  return envelope_prefactor(bp) * envelope_shape(bp, t);
}

ExponentSet compute_exponents(const ModelParams& params, double p, FdExponentVariant variant) {
  if (!(p >= 1.0)) throw validation_error("compute_exponents: p must be >= 1");
  const double d = params.d, s = params.s, m = params.m;
  const double frac = s - d + 2.0;
  ExponentSet e;
  e.p = p;
  e.gamma = m * d / frac;
  if (params.regime == Regime::Clogged && e.gamma >= 1.0 && p <= e.gamma)
    throw validation_error(
        "compute_exponents: the clogged regularization with gamma >= 1 requires p > gamma");
  e.delta_p = d / (p * frac - m * d);
  const double a = std::abs(p - m) + m;
  e.zeta_p = a * frac / (a * frac - m * d);
  const double md = variant == FdExponentVariant::PlusMd ? m * d : -m * d;
  e.delta_fd = d / (frac + md);
  return e;
}

double barrier_constant(const ModelParams& params) { return params.cds * params.cdalpha; }

}  // namespace nlpm
