#pragma once

#include "nlpm/operators.hpp"

#include <vector>

namespace nlpm {

/// Parameters of the space-independent lower-barrier ODE
///   clogged:        dPhi/dt = C (mass - Phi) / Phi^m
///   fast diffusion: dPhi/dt = C Phi^m (mass - Phi)
struct BarrierParams {
  double m = 0.5;
  double mass = 1.0;   // mu_bar (or mu_bar_eps for approximate runs)
  double C = 1.0;      // barrier constant C_{d,s}
  double phi0 = 0.0;   // initial value, eps for approximate runs
  Regime regime = Regime::FastDiffusion;
};

struct BarrierCurve {
  std::vector<double> times;
  std::vector<double> values;

  /// Piecewise-linear interpolation (times are sorted).
  double at(double t) const;
};

/// Exponents of the instantaneous-regularization statements.
struct ExponentSet {
  double gamma = 0.0;     // m d / (s - d + 2)
  double delta_p = 0.0;   // d / (p (s-d+2) - m d)
  double zeta_p = 0.0;    // (|p-m|+m)(s-d+2) / ((|p-m|+m)(s-d+2) - m d)
  double delta_fd = 0.0;  // d / (s - d + 2 + m d), or - m d with the variant flag
  double p = 1.0;
};

enum class FdExponentVariant { PlusMd, MinusMd };

/// Integrate the barrier ODE on [0, t_end], sampled at n_points times
/// (uniform in t). The degenerate start Phi(0) = 0 is handled by stepping
/// the desingularized variable psi = Phi^{1 +- m} / (1 +- m), whose
/// right-hand side psi' = C (mass - Phi) is regular at the origin and
/// selects the positive branch.
BarrierCurve solve_barrier(const BarrierParams& bp, double t_end, int n_points,
                           int substeps_per_point = 64);

/// Closed-form envelope prefactor * min((mass t)^{1/(1 -+ m)}, mass (1 - e^{-C t})).
/// The prefactor is derived per parameter set by minimizing the ratio of the
/// ODE solution to the envelope shape over a log-spaced time grid.
double barrier_envelope(const BarrierParams& bp, double t);

/// The derived envelope prefactor (exposed so runs can record it).
double envelope_prefactor(const BarrierParams& bp);

/// All exponent formulas for one (params, p) pair.
ExponentSet compute_exponents(const ModelParams& params, double p,
                              FdExponentVariant variant = FdExponentVariant::PlusMd);

/// Barrier constant C_{d,s} = c_{d,s} * c_{d,alpha}, the product arising from
/// the minimum principle applied at the extremum curve.
double barrier_constant(const ModelParams& params);

}  // namespace nlpm
