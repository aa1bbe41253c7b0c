#include "nlpm/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nlpm {

namespace {

int check_image_radius(int d) { return d == 1 ? 6 : 4; }

double sigma_d(int d) { return d == 1 ? 2.0 : 2.0 * std::numbers::pi; }

double grid_mean_abs(const Field& f) {
  double acc = 0.0;
  for (double v : f.values) acc += std::abs(v);
  return acc / static_cast<double>(f.values.size());
}

/// Bound on the calibrated grid-defect correction of the lattice-sum
/// operator at one point: |c Z h^{2-alpha} Delta f(x)| with |Z| <= 1 on the
/// supported alpha range.
double defect_slack(const Field& f, const ModelParams& params, std::size_t index) {
  const Field neglap = frac_laplacian_spectral(f, 2.0);
  const double h = f.grid.spacing();
  return 1.5 * params.cdalpha * std::pow(h, 2.0 - params.alpha) * std::abs(neglap.values[index]);
}

}  // namespace

CheckVerdict check_min_principle(const Field& f, const ModelParams& params) {
  CheckVerdict v;
  v.name = "min-principle";
  const std::size_t ix = f.argmin();
  const double lhs =
      frac_laplacian_latticesum_at(f, params.alpha, check_image_radius(params.d), ix);
  const double mean = f.mean();
  const double rhs = params.cdalpha * (f.values[ix] - mean);
  const double scale =
      params.cdalpha * (std::abs(mean) + f.max() - f.min()) + std::abs(lhs) + 1e-30;
  const double slack = defect_slack(f, params, ix) + 1e-9 * scale;
  v.margin = (rhs - lhs + slack) / scale;
  v.passed = v.margin >= 0.0;
  v.details["lhs"] = lhs;
  v.details["rhs"] = rhs;
  v.details["slack"] = slack;
  return v;
}

CheckVerdict check_cv_max_principle(const Field& f, const ModelParams& params,
                                    const ConvexProbe& probe) {
  if (!(probe.exponent >= 1.0))
    throw validation_error("check_cv_max_principle: probe exponent must be >= 1");
  // Spectrally synthesized nonnegative fields carry rounding-level negative
  // tails; clamp those, but reject genuinely signed inputs.
  if (f.min() < -1e-10 * std::max(1.0, f.max()))
    throw validation_error("check_cv_max_principle: field must be nonnegative");
  Field fc = f;
  for (double& x : fc.values) x = std::max(x, 0.0);
  const Field& g = fc;
  CheckVerdict v;
  v.name = "cv-max-principle";
  const int d = params.d;
  const double a = params.alpha;
  const double cda = params.cdalpha;
  const double cprime = cda * sigma_d(d) / a;
  const double linf = g.max();
  const double l1 = grid_mean_abs(g);

  // Second branch: ||f||_inf <= C' ||f||_1 with C' from the cutoff radius
  // hitting the half-diagonal.
  const double half_diag = 0.5 * std::sqrt(static_cast<double>(d));
  const double Cprime = (d + a) * cda / (cprime * std::pow(half_diag, d));
  const double margin2 = (Cprime * l1 - linf) / (linf + 1e-30);

  // First branch, evaluated on h(f) = f^q at the argmax.
  Field hf(g.grid);
  for (std::size_t i = 0; i < g.values.size(); ++i)
    hf.values[i] = std::pow(g.values[i], probe.exponent);
  const std::size_t ix = g.argmax();
  const double lhs = frac_laplacian_latticesum_at(hf, a, check_image_radius(d), ix);
  const double C =
      cprime * ((d + a - 1.0) / (d + a)) * std::pow(cprime / ((d + a) * cda), a / d);
  const double rhs = C * hf.values[ix] * std::pow(linf / l1, a / d);
  const double scale = std::abs(lhs) + std::abs(rhs) + 1e-30;
  const double slack = defect_slack(hf, params, ix) + 1e-9 * scale;
  const double margin1 = (lhs - rhs + slack) / scale;

  v.margin = std::max(margin1, margin2);
  v.passed = v.margin >= 0.0;
  v.details["branch1_lhs"] = lhs;
  v.details["branch1_rhs"] = rhs;
  v.details["branch1_margin"] = margin1;
  v.details["branch2_margin"] = margin2;
  v.details["cutoff_radius"] = std::pow((d + a) * cda * l1 / (cprime * linf), 1.0 / d);
  return v;
}

CheckVerdict check_stroock_varopoulos(const Field& f, double p, double order) {
  if (!(order > 0.0 && order < 2.0))
    throw validation_error("check_stroock_varopoulos: order must lie in (0,2)");
  if (f.min() <= 0.0)
    throw validation_error("check_stroock_varopoulos: field must be strictly positive");
  CheckVerdict v;
  v.name = "stroock-varopoulos";
  const Field L = frac_laplacian_spectral(f, order);
  double lhs = 0.0;
  if (std::abs(p - 1.0) < 1e-14) {
    for (std::size_t i = 0; i < f.values.size(); ++i)
      lhs += std::log(f.values[i]) * L.values[i];
    lhs /= static_cast<double>(f.values.size());
  } else {
    for (std::size_t i = 0; i < f.values.size(); ++i)
      lhs += std::pow(f.values[i], p - 1.0) * L.values[i];
    lhs /= static_cast<double>(f.values.size()) * (p - 1.0);
  }
  Field powf(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    powf.values[i] = std::pow(f.values[i], 0.5 * p);
  const double semi = gagliardo_seminorm(powf, 0.5 * order);
  const double rhs = (2.0 / (p * p)) * semi * semi;
  const double scale = std::abs(lhs) + rhs + 1e-30;
  const double slack = 1e-8 * scale;
  v.margin = (lhs - rhs + slack) / scale;
  v.passed = v.margin >= 0.0;
  v.details["lhs"] = lhs;
  v.details["rhs"] = rhs;
  return v;
}

namespace {

struct Series {
  std::vector<double> t, x;
};

Series extract(const std::vector<DiagnosticsRecord>& recs, double (*get)(const DiagnosticsRecord&)) {
  Series s;
  s.t.reserve(recs.size());
  s.x.reserve(recs.size());
  for (const auto& r : recs) {
    s.t.push_back(r.time);
    s.x.push_back(get(r));
  }
  return s;
}

/// Largest consecutive increase (for nonincreasing checks).
double worst_increase(const std::vector<double>& x) {
  double w = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < x.size(); ++i) w = std::max(w, x[i] - x[i - 1]);
  return x.size() > 1 ? w : 0.0;
}

/// Time at which the two envelope branches cross (the min switches
/// argument); falls back to the half-saturation time if they never cross.
double fit_window_end(const BarrierParams& bp) {
  const double q = bp.regime == Regime::Clogged ? 1.0 + bp.m : 1.0 - bp.m;
  auto F = [&](double t) {
    return std::pow(bp.mass * t, 1.0 / q) - bp.mass * (1.0 - std::exp(-bp.C * t));
  };
  const double t_lo = 1e-10 / bp.C, t_hi = 50.0 / bp.C;
  double prev_t = t_lo, prev_F = F(t_lo);
  for (int i = 1; i <= 400; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, i / 400.0);
    const double Ft = F(t);
    if ((prev_F < 0.0) != (Ft < 0.0)) {
      double a = prev_t, b = t;
      for (int j = 0; j < 60; ++j) {
        const double mid = 0.5 * (a + b);
        if ((F(mid) < 0.0) == (prev_F < 0.0))
          a = mid;
        else
          b = mid;
      }
      return 0.5 * (a + b);
    }
    prev_t = t;
    prev_F = Ft;
  }
  return std::log(2.0) / bp.C;
}

/// Power-law fit restricted to a time window and a value band; drops the
/// value band if it leaves too few samples.
bool windowed_fit(const Series& s, double t_lo, double t_hi, double v_lo, double v_hi,
                  PowerLawFit& fit) {
  std::vector<double> t, x;
  for (std::size_t i = 0; i < s.t.size(); ++i)
    if (s.t[i] > t_lo && s.t[i] < t_hi && s.x[i] > v_lo && s.x[i] < v_hi) {
      t.push_back(s.t[i]);
      x.push_back(s.x[i]);
    }
  try {
    if (t.size() >= 5) {
      fit = fit_powerlaw(t, x, t_lo, t_hi);
      return true;
    }
    fit = fit_powerlaw(s.t, s.x, t_lo, t_hi);
    return true;
  } catch (const validation_error&) {
    return false;
  }
}

}  // namespace

std::vector<CheckVerdict> check_theorem_items(const EvolveResult& run, const ModelParams& params,
                                              const TheoremCheckOptions& opts) {
  const auto& recs = run.records;
  if (recs.empty()) throw validation_error("check_theorem_items: run has no records");
  std::vector<CheckVerdict> out;
  auto add = [&out](CheckVerdict v) { out.push_back(std::move(v)); };

  bool trusted = true;
  for (const auto& r : recs)
    if (!(r.spectral_tail < 1e-8 * std::max(r.linf, 1e-300))) trusted = false;

  std::vector<std::string> names = {"l1-monotone", "mass-conserved", "extrema-monotone",
                                    "energy-monotone", "lower-barrier"};
  for (const auto& kv : run.ledger.sv)
    names.push_back("lp-combined-p" + std::to_string(static_cast<int>(kv.first)));
  if (opts.fit_exponents) {
    names.push_back("barrier-growth-exponent");
    names.push_back("regularization-exponent");
    names.push_back("regularization-bound");
  }
  if (!trusted) {
    for (const auto& n : names) {
      CheckVerdict v;
      v.name = n;
      v.skipped = true;
      add(std::move(v));
    }
    return out;
  }

  const double sgn = params.regime == Regime::Clogged ? -1.0 : 1.0;

  {  // (i) L1 norm nonincreasing.
    CheckVerdict v;
    v.name = "l1-monotone";
    Series s = extract(recs, [](const DiagnosticsRecord& r) { return r.lp_norms.at(1.0); });
    const double slack = opts.l1_rel_tol * s.x.front();
    const double w = worst_increase(s.x);
    v.margin = (slack - w) / (s.x.front() + 1e-30);
    v.passed = v.margin >= 0.0;
    v.details["worst_increase"] = w;
    add(std::move(v));
  }
  {  // (ii) mass conservation.
    CheckVerdict v;
    v.name = "mass-conserved";
    double lo = recs.front().mass, hi = lo;
    for (const auto& r : recs) {
      lo = std::min(lo, r.mass);
      hi = std::max(hi, r.mass);
    }
    const double drift = (hi - lo) / std::abs(recs.front().mass);
    v.margin = (opts.mass_rel_tol - drift) / opts.mass_rel_tol;
    v.passed = v.margin >= 0.0;
    v.details["relative_drift"] = drift;
    add(std::move(v));
  }
  {  // (iii) max nonincreasing, min nondecreasing.
    CheckVerdict v;
    v.name = "extrema-monotone";
    Series smax = extract(recs, [](const DiagnosticsRecord& r) { return r.max_value; });
    Series smin = extract(recs, [](const DiagnosticsRecord& r) { return r.min_value; });
    std::vector<double> neg_min(smin.x.size());
    for (std::size_t i = 0; i < smin.x.size(); ++i) neg_min[i] = -smin.x[i];
    const double slack = opts.extrema_slack * std::max(1.0, smax.x.front());
    const double w = std::max(worst_increase(smax.x), worst_increase(neg_min));
    v.margin = (slack - w) / std::max(1.0, smax.x.front());
    v.passed = v.margin >= 0.0;
    v.details["worst_violation"] = w;
    add(std::move(v));
  }
  {  // (v) energy nonincreasing.
    CheckVerdict v;
    v.name = "energy-monotone";
    Series s = extract(recs, [](const DiagnosticsRecord& r) { return r.energy; });
    const double slack = opts.energy_rel_tol * std::abs(s.x.front()) + 1e-12;
    const double w = worst_increase(s.x);
    v.margin = (slack - w) / (std::abs(s.x.front()) + 1e-12);
    v.passed = v.margin >= 0.0;
    v.details["worst_increase"] = w;
    add(std::move(v));
  }

  // Barrier setup shared by (vi) and the growth-exponent fit.
  BarrierParams bp;
  bp.m = params.m;
  bp.mass = run.mu_bar_eps;
  bp.C = barrier_constant(params);
  bp.phi0 = params.epsilon;
  bp.regime = params.regime;
  const double t_end = recs.back().time;

  {  // (vi) pointwise lower barrier.
    CheckVerdict v;
    v.name = "lower-barrier";
    if (t_end <= 0.0) {
      v.passed = recs.front().min_value >= bp.phi0 - opts.barrier_slack;
      v.margin = (recs.front().min_value - bp.phi0 + opts.barrier_slack) / bp.mass;
    } else {
      auto min_clearance = [&](double C_try) {
        BarrierParams b2 = bp;
        b2.C = C_try;
        // Fine output grid: the interpolation error of the convex early
        // segment must stay below the barrier slack.
        BarrierCurve phi = solve_barrier(b2, t_end, 4096, 16);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& r : recs) worst = std::min(worst, r.min_value - phi.at(r.time));
        return worst;
      };
      const double clear0 = min_clearance(bp.C);
      v.margin = (clear0 + opts.barrier_slack) / bp.mass;
      v.passed = v.margin >= 0.0;
      v.details["worst_clearance"] = clear0;
      // Report the largest constant for which the barrier still holds.
      double lo = bp.C, hi = bp.C;
      if (v.passed) {
        while (min_clearance(hi) + opts.barrier_slack >= 0.0 && hi < 1e6 * bp.C) hi *= 2.0;
        for (int i = 0; i < 30; ++i) {
          const double mid = 0.5 * (lo + hi);
          (min_clearance(mid) + opts.barrier_slack >= 0.0 ? lo : hi) = mid;
        }
      }
      v.details["largest_passing_C"] = lo;
      v.details["barrier_C"] = bp.C;
    }
    add(std::move(v));
  }

  for (const auto& kv : run.ledger.sv) {  // (iv) combined L^p inequality.
    const double p = kv.first;
    CheckVerdict v;
    v.name = "lp-combined-p" + std::to_string(static_cast<int>(p));
    const double denom = p + sgn * params.m;
    const double pref = p * (p - 1.0) / (denom * denom) * params.cds;
    const double lp0 = std::pow(recs.front().lp_norms.at(p), p);
    const double lpT = std::pow(recs.back().lp_norms.at(p), p);
    const double slack = pref * kv.second.slack + 1e-8 * lp0;
    v.margin = (lp0 + slack - lpT - pref * kv.second.value) / lp0;
    v.passed = v.margin >= 0.0;
    v.details["lp0"] = lp0;
    v.details["lpT"] = lpT;
    v.details["dissipated"] = pref * kv.second.value;
    v.details["slack"] = slack;
    add(std::move(v));
  }

  if (opts.fit_exponents) {
    const double t_lo = 5.0 * run.dt_initial;
    const double t_hi = std::min(fit_window_end(bp), t_end);
    const double q = params.regime == Regime::Clogged ? 1.0 + params.m : 1.0 - params.m;

    {  // Early-window growth rate of the minimum, expected 1/(1 -+ m).
      CheckVerdict v;
      v.name = "barrier-growth-exponent";
      Series s = extract(recs, [](const DiagnosticsRecord& r) { return r.min_value; });
      PowerLawFit fit;
      if (!windowed_fit(s, t_lo, t_hi, 5.0 * params.epsilon, 0.05 * bp.mass, fit)) {
        v.skipped = true;
      } else {
        const double expected = 1.0 / q;
        v.margin = (opts.exponent_rel_tol * expected - std::abs(fit.exponent - expected)) / expected;
        v.passed = v.margin >= 0.0;
        v.details["fitted"] = fit.exponent;
        v.details["expected"] = expected;
        v.details["r_squared"] = fit.r_squared;
      }
      add(std::move(v));
    }

    // Early-window decay rate of the maximum norm.
    const ExponentSet ex = compute_exponents(params, opts.fit_p, opts.variant);
    const double delta = params.regime == Regime::Clogged ? ex.delta_p : ex.delta_fd;
    Series s = extract(recs, [](const DiagnosticsRecord& r) { return r.linf; });
    {
      CheckVerdict v;
      v.name = "regularization-exponent";
      PowerLawFit fit;
      if (!windowed_fit(s, t_lo, t_hi, 2.5 * bp.mass, 0.3 * s.x.front(), fit)) {
        v.skipped = true;
      } else {
        v.margin = (opts.exponent_rel_tol * delta - std::abs(fit.exponent + delta)) / delta;
        v.passed = v.margin >= 0.0;
        v.details["fitted"] = fit.exponent;
        v.details["expected"] = -delta;
        v.details["r_squared"] = fit.r_squared;
      }
      add(std::move(v));
    }
    {  // Fitted bound ||f(t)||_inf <= A t^{-delta} ||f_0||_p^{zeta} + B.
      CheckVerdict v;
      v.name = "regularization-bound";
      const double P = std::pow(recs.front().lp_norms.count(opts.fit_p)
                                    ? recs.front().lp_norms.at(opts.fit_p)
                                    : recs.front().lp_norms.at(1.0),
                                ex.zeta_p);
      double B = s.x.front();
      for (double x : s.x) B = std::min(B, x);
      // Least-squares scale, then enlarged if needed so the bound dominates.
      double num = 0.0, den = 0.0, A_dom = 0.0;
      for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (!(s.t[i] > 0.0)) continue;
        const double basis = std::pow(s.t[i], -delta) * P;
        num += basis * (s.x[i] - B);
        den += basis * basis;
        A_dom = std::max(A_dom, (s.x[i] - B) / basis);
      }
      const double A_ls = den > 0.0 ? num / den : 0.0;
      const double A = std::max(A_ls, A_dom);
      v.passed = std::isfinite(A) && A >= 0.0;
      v.margin = v.passed ? 1.0 : -1.0;
      v.details["A_leastsq"] = A_ls;
      v.details["A_used"] = A;
      v.details["B"] = B;
      v.details["delta"] = delta;
      v.details["zeta"] = ex.zeta_p;
      add(std::move(v));
    }
  }
  return out;
}

}  // namespace nlpm
