#pragma once

#include "nlpm/operators.hpp"

#include <limits>
#include <map>
#include <vector>

namespace nlpm {

/// Per-snapshot scalar functionals. Quadrature is trapezoidal, which is
/// exact for band-limited integrands on the uniform periodic grid.
struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  std::map<double, double> lp_norms;  // p -> ||f||_p (the grid max for p = inf)
  double linf = 0.0;
  double energy = 0.0;  // integral of (g * f) f
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  double spectral_tail = 0.0;  // max |coeff| over modes with any |k| > N/3
  double dt = 0.0;
  // Running dissipation accumulators at this time (filled by evolve).
  std::map<double, double> dissipation_acc;
  std::map<double, double> sv_acc;
  double flux_acc = 0.0;
};

/// Rectangle-rule time accumulator with a one-sided quadrature-slack bound
/// (half the total variation of the integrand times the step).
struct Accumulator {
  double value = 0.0;
  double slack = 0.0;
  double last_integrand = std::numeric_limits<double>::quiet_NaN();

  void add(double integrand, double dt);
};

/// Time-quadrature accumulators for the dissipation functionals.
/// `dissipation[p]` carries the full theorem middle term
///   prefactor * c_{d,s} * integral of mu^{p-1 -+ m} |grad|^{s-d+2} mu,
/// `sv[p]` the Stroock-Varopoulos lower-bound form
///   integral of | |grad|^{(s-d+2)/2} mu^{(p -+ m)/2} |^2   (no prefactor),
/// and `flux` the energy-dissipation integrand |grad g * mu|^2 mu^{-+ m}.
struct DissipationLedger {
  std::map<double, Accumulator> dissipation;
  std::map<double, Accumulator> sv;
  Accumulator flux;
};

DiagnosticsRecord record(const Field& f, const ModelParams& params, double t,
                         const std::vector<double>& p_list);

void accumulate_dissipation(DissipationLedger& ledger, const Field& f, const ModelParams& params,
                            double p, double dt);

void accumulate_energy_flux(DissipationLedger& ledger, const Field& f, const ModelParams& params,
                            double dt);

/// Homogeneous Sobolev seminorm (sum over k != 0 of |2 pi k|^{2 order} |f_k|^2)^{1/2}.
double gagliardo_seminorm(const Field& f, double order);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line fit of log(values) vs log(times) restricted to the
/// window (t_lo, t_hi). Requires >= 5 samples strictly inside and positive values.
PowerLawFit fit_powerlaw(const std::vector<double>& times, const std::vector<double>& values,
                         double t_lo, double t_hi);

}  // namespace nlpm
