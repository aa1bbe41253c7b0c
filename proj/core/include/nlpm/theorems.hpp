#pragma once

#include "nlpm/barriers.hpp"
#include "nlpm/dynamics.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlpm {

/// h(u) = u^q with q >= 1: nondecreasing, convex, h(0) = 0.
struct ConvexProbe {
  double exponent = 1.0;
};

struct CheckVerdict {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double margin = 0.0;  // signed normalized distance to the boundary; >= 0 iff passed
  std::map<std::string, double> details;
};

/// At the grid argmin x of f: lattice-sum (-Delta)^{alpha/2} f(x) <=
/// c_{d,alpha} (f(x) - mean f), with quadrature slack.
CheckVerdict check_min_principle(const Field& f, const ModelParams& params);

/// At the grid argmax of f, with h(u) = u^q: either
///   (-Delta)^{alpha/2} h(f)(x) >= C h(f(x)) (||f||_inf / ||f||_1)^{alpha/d}
/// or ||f||_inf <= C' ||f||_1, with the explicit constants assembled from
/// the cutoff-radius choice R^d = (d+alpha) c_{d,alpha} ||f||_1 /
/// (c'_{d,alpha} ||f||_inf), c'_{d,alpha} = sigma_d c_{d,alpha} / alpha.
CheckVerdict check_cv_max_principle(const Field& f, const ModelParams& params,
                                    const ConvexProbe& probe);

/// (1/(p-1)) int f^{p-1} (-Delta)^{order/2} f >= (2/p^2) || |grad|^{order/2}
/// f^{p/2} ||^2, with int log(f) (-Delta)^{order/2} f on the left at p = 1.
CheckVerdict check_stroock_varopoulos(const Field& f, double p, double order);

struct TheoremCheckOptions {
  bool fit_exponents = false;   // enable the decay/growth-rate fits (peaked data)
  double fit_p = 1.0;           // norm index entering delta_p / zeta_p
  FdExponentVariant variant = FdExponentVariant::PlusMd;
  double extrema_slack = 1e-8;
  double mass_rel_tol = 1e-11;
  double l1_rel_tol = 1e-10;
  double energy_rel_tol = 1e-6;
  double barrier_slack = 1e-8;
  double exponent_rel_tol = 0.15;
};

/// End-to-end checks of the evolution run: one verdict per theorem item.
/// All verdicts come back skipped (never passed) if any record fails the
/// resolution trust gate spectral_tail < 1e-8 ||f||_inf.
std::vector<CheckVerdict> check_theorem_items(const EvolveResult& run, const ModelParams& params,
                                              const TheoremCheckOptions& opts = {});

}  // namespace nlpm
