// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full desk-scale verification campaign.

#include "nlpm/io.hpp"
#include "nlpm/probes.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace nlpm;

namespace {

bool g_all_ok = true;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  criterion-%d  %-28s  %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) g_all_ok = false;
}

double rel_l2_error(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
    den += b.values[i] * b.values[i];
  }
  return std::sqrt(num / den);
}

// ---- criterion 1 -----------------------------------------------------------

void criterion_operator_crossval() {
  const TorusGrid g = make_grid(1, 256);
  const double alphas[] = {1.2, 1.5, 1.8};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Field f = random_band_limited(g, 100 + i, 32);
    const double alpha = alphas[i % 3];
    const Field spec = frac_laplacian_spectral(f, alpha);
    const Field lat = frac_laplacian_latticesum(f, alpha, 6);
    worst = std::max(worst, rel_l2_error(lat, spec));
  }
  std::ostringstream d;
  d << "worst relative L2 discrepancy " << worst << " (tol 1e-3)";
  report(1, "operator-cross-validation", worst <= 1e-3, d.str());
}

// ---- criterion 2 -----------------------------------------------------------

struct SuiteTally {
  int passed = 0, total = 0;
  void add(const CheckVerdict& v) {
    ++total;
    if (v.passed) ++passed;
  }
};

void criterion_lemma_suites() {
  const double alphas1[] = {1.2, 1.5, 1.8};
  const double alphas2[] = {1.0, 1.4};
  SuiteTally minp, cv, sv;

  for (int i = 0; i < 200; ++i) {
    const int d = i % 2 == 0 ? 1 : 2;
    const double alpha = d == 1 ? alphas1[i % 3] : alphas2[i % 2];
    const ModelParams params = make_params(d, alpha + d - 2.0, 0.5, Regime::FastDiffusion, 1e-3);
    const TorusGrid g = make_grid(d, d == 1 ? 128 : 64);
    const Field f = random_band_limited(g, 7000003ULL + i);
    minp.add(check_min_principle(f, params));
  }
  for (int i = 0; i < 200; ++i) {
    const int d = i % 2 == 0 ? 1 : 2;
    const double alpha = d == 1 ? alphas1[i % 3] : alphas2[i % 2];
    const ModelParams params = make_params(d, alpha + d - 2.0, 0.5, Regime::FastDiffusion, 1e-3);
    const TorusGrid g = make_grid(d, d == 1 ? 128 : 64);
    Field f = (d == 1 && i % 10 == 0) ? approx_dirac_probe(g, 0.02, 1.0)
                                      : random_band_limited(g, 14000003ULL + i, 0,
                                                            i % 5 == 0 ? 0.01 : 0.5);
    for (double q : {1.0, 2.0, 3.0}) cv.add(check_cv_max_principle(f, params, ConvexProbe{q}));
  }
  const double ps[] = {0.5, 1.0, 1.5, 3.0};
  const double orders[] = {0.5, 1.0, 1.5};
  for (int i = 0; i < 500; ++i) {
    const int d = i % 5 == 4 ? 2 : 1;
    const TorusGrid g = make_grid(d, d == 1 ? 128 : 64);
    const Field f = random_band_limited(g, 21000017ULL + i, 0, 0.3 + 0.1 * (i % 4));
    sv.add(check_stroock_varopoulos(f, ps[i % 4], orders[(i / 4) % 3]));
  }
  std::ostringstream d;
  d << "min " << minp.passed << "/" << minp.total << ", cv " << cv.passed << "/" << cv.total
    << ", sv " << sv.passed << "/" << sv.total;
  report(2, "lemma-suites",
         minp.passed == minp.total && cv.passed == cv.total && sv.passed == sv.total, d.str());
}

// ---- shared run machinery for criteria 3-6, 8, 9 ---------------------------

struct RunChecks {
  std::map<std::string, bool> passed;
  std::map<std::string, double> margin;
  long steps = 0;
};

RunChecks run_and_check(int dim, double s, Regime reg, InitialDataSpec::Kind kind, double eps,
                        int N, double t_end) {
  const ModelParams params = make_params(dim, s, 0.5, reg, eps);
  const TorusGrid g = make_grid(dim, N);
  InitialDataSpec spec;
  spec.kind = kind;
  spec.amplitude = 0.5;
  spec.wavevector = 1;
  spec.spectral_width = 0.01;
  const Field init = prepare_initial_data(spec, params, g);
  const EvolveResult run = evolve(init, params, StepControl{}, t_end, {});
  TheoremCheckOptions opts;
  opts.fit_exponents = kind == InitialDataSpec::Kind::ApproxDirac;
  // Near-Dirac data starts an epsilon-thick initial layer whose adjustment
  // wiggles the extrema at the 1e-5 relative level for a handful of steps
  // (independent of resolution); the smooth-data invariant runs keep the
  // strict 1e-8 slack.
  if (kind == InitialDataSpec::Kind::ApproxDirac) opts.extrema_slack = 1e-4;
  RunChecks rc;
  rc.steps = run.total_steps;
  for (const auto& v : check_theorem_items(run, params, opts)) {
    rc.passed[v.name] = v.passed;
    rc.margin[v.name] = v.margin;
  }
  return rc;
}

bool get(const RunChecks& rc, const std::string& name) {
  auto it = rc.passed.find(name);
  return it != rc.passed.end() && it->second;
}

struct Campaign {
  RunChecks fd_cos, cl_cos, fd_dirac, cl_dirac;
};

Campaign run_campaign(double eps) {
  Campaign c;
  c.fd_cos = run_and_check(1, 0.5, Regime::FastDiffusion, InitialDataSpec::Kind::CosineBump, eps,
                           256, 2.0);
  c.cl_cos =
      run_and_check(1, 0.5, Regime::Clogged, InitialDataSpec::Kind::CosineBump, eps, 256, 2.0);
  c.fd_dirac = run_and_check(1, 0.5, Regime::FastDiffusion, InitialDataSpec::Kind::ApproxDirac,
                             eps, 256, 1.0);
  c.cl_dirac =
      run_and_check(1, 0.5, Regime::Clogged, InitialDataSpec::Kind::ApproxDirac, eps, 256, 1.5);
  return c;
}

void criterion_conservation(const Campaign& c) {
  const bool ok = get(c.fd_cos, "mass-conserved") && get(c.fd_cos, "l1-monotone") &&
                  get(c.fd_cos, "extrema-monotone") && get(c.fd_cos, "energy-monotone");
  std::ostringstream d;
  d << c.fd_cos.steps << " steps, mass margin " << c.fd_cos.margin.at("mass-conserved")
    << ", energy margin " << c.fd_cos.margin.at("energy-monotone");
  report(3, "conservation-monotonicity", ok, d.str());
}

void criterion_lp_combined(const Campaign& c) {
  bool ok = true;
  std::ostringstream d;
  for (const auto* rc : {&c.fd_cos, &c.cl_cos}) {
    for (const char* name : {"lp-combined-p2", "lp-combined-p3"}) {
      if (!get(*rc, name)) ok = false;
      d << name << " margin " << rc->margin.at(name) << "; ";
    }
  }
  report(4, "combined-lp-inequality", ok, d.str());
}

void criterion_barrier(const Campaign& c) {
  const bool ok = get(c.fd_dirac, "lower-barrier") && get(c.cl_dirac, "lower-barrier") &&
                  get(c.fd_dirac, "barrier-growth-exponent") &&
                  get(c.cl_dirac, "barrier-growth-exponent");
  std::ostringstream d;
  d << "clearance margins fd " << c.fd_dirac.margin.at("lower-barrier") << " / cl "
    << c.cl_dirac.margin.at("lower-barrier") << ", growth margins fd "
    << c.fd_dirac.margin.at("barrier-growth-exponent") << " / cl "
    << c.cl_dirac.margin.at("barrier-growth-exponent");
  report(5, "lower-barrier", ok, d.str());
}

void criterion_regularization(const Campaign& c) {
  const bool ok = get(c.fd_dirac, "regularization-exponent") &&
                  get(c.cl_dirac, "regularization-exponent") &&
                  get(c.cl_dirac, "regularization-bound");
  std::ostringstream d;
  d << "slope margins fd " << c.fd_dirac.margin.at("regularization-exponent") << " / cl "
    << c.cl_dirac.margin.at("regularization-exponent");
  report(6, "regularization-exponents", ok, d.str());
}

// ---- criterion 7 -----------------------------------------------------------

void criterion_barrier_ode() {
  bool ok = true;
  std::ostringstream d;
  for (Regime reg : {Regime::Clogged, Regime::FastDiffusion}) {
    BarrierParams bp;
    bp.m = 0.5;
    bp.mass = 1.0;
    bp.C = barrier_constant(make_params(1, 0.5, 0.5, reg, 1e-3));
    bp.phi0 = 0.0;
    bp.regime = reg;
    const double q = reg == Regime::Clogged ? 1.5 : 0.5;

    // Step-halving stability.
    BarrierCurve a = solve_barrier(bp, 5.0, 101, 64);
    BarrierCurve b = solve_barrier(bp, 5.0, 101, 128);
    double dh = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      dh = std::max(dh, std::abs(a.values[i] - b.values[i]) / std::max(1e-30, b.values[i]));
    if (dh > 1e-8) ok = false;

    // Small-time asymptotics within 1%.
    BarrierCurve small = solve_barrier(bp, 1e-4 / bp.C, 64);
    double asym = 0.0;
    for (std::size_t i = 8; i < small.times.size(); ++i) {
      const double expect = std::pow(q * bp.C * bp.mass * small.times[i], 1.0 / q);
      asym = std::max(asym, std::abs(small.values[i] - expect) / expect);
    }
    if (asym > 1e-2) ok = false;

    // Equilibrium at t = 50 / C.
    BarrierCurve eq = solve_barrier(bp, 50.0 / bp.C, 256);
    const double eqerr = std::abs(eq.values.back() - bp.mass);
    if (eqerr > 1e-6) ok = false;

    d << (reg == Regime::Clogged ? "cl" : "fd") << ": halving " << dh << ", asym " << asym
      << ", eq " << eqerr << "; ";
  }
  report(7, "barrier-ode-quality", ok, d.str());
}

// ---- criterion 8 -----------------------------------------------------------

void criterion_robustness(const Campaign& base) {
  const Campaign half = run_campaign(5e-4);
  bool ok = true;
  std::ostringstream d;
  int flips = 0;
  auto compare = [&](const RunChecks& a, const RunChecks& b) {
    for (const auto& kv : a.passed) {
      auto it = b.passed.find(kv.first);
      if (it == b.passed.end() || it->second != kv.second) ++flips;
    }
  };
  compare(base.fd_cos, half.fd_cos);
  compare(base.cl_cos, half.cl_cos);
  compare(base.fd_dirac, half.fd_dirac);
  compare(base.cl_dirac, half.cl_dirac);
  if (flips != 0) ok = false;

  // Determinism: identical config reproduces byte-identical CSV.
  const ModelParams params = make_params(1, 0.5, 0.5, Regime::FastDiffusion, 1e-3);
  const TorusGrid g = make_grid(1, 128);
  InitialDataSpec spec;
  spec.kind = InitialDataSpec::Kind::CosineBump;
  spec.amplitude = 0.5;
  const Field init = prepare_initial_data(spec, params, g);
  const EvolveResult r1 = evolve(init, params, StepControl{}, 0.2, {});
  const EvolveResult r2 = evolve(init, params, StepControl{}, 0.2, {});
  const bool identical =
      diagnostics_csv(r1.records, {2.0, 3.0}) == diagnostics_csv(r2.records, {2.0, 3.0});
  if (!identical) ok = false;
  d << flips << " verdict flips at eps/2, CSV byte-identical: " << (identical ? "yes" : "no");
  report(8, "eps-robustness-determinism", ok, d.str());
}

// ---- criterion 9 -----------------------------------------------------------

void criterion_2d_smoke() {
  const RunChecks rc = run_and_check(2, 1.0, Regime::FastDiffusion,
                                     InitialDataSpec::Kind::CosineBump, 1e-3, 128, 0.5);
  const bool ok = get(rc, "mass-conserved") && get(rc, "l1-monotone") &&
                  get(rc, "extrema-monotone") && get(rc, "energy-monotone");
  std::ostringstream d;
  d << rc.steps << " steps, mass margin " << rc.margin.at("mass-conserved");
  report(9, "2d-smoke", ok, d.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_operator_crossval();
  criterion_lemma_suites();
  const Campaign base = run_campaign(1e-3);
  criterion_conservation(base);
  criterion_lp_combined(base);
  criterion_barrier(base);
  criterion_regularization(base);
  criterion_barrier_ode();
  criterion_robustness(base);
  criterion_2d_smoke();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  (total wall time %.1f s)\n", g_all_ok ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              wall);
  return g_all_ok ? 0 : 1;
}
