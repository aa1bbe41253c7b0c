#include "nlpm/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace nlpm {

namespace {

double lp_norm(const Field& f, double p) {
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::abs(v), p);
  acc /= static_cast<double>(f.values.size());  // cell volume = 1 / total_points
  return std::pow(acc, 1.0 / p);
}

double integral(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double spectral_tail(const SpectralField& F) {
  const TorusGrid& g = F.grid;
  const int N = g.points_per_axis;
  const int kmax = N / 3;
  double tail = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    int k0, k1 = 0;
    if (g.d == 1) {
      k0 = wavenumber(static_cast<int>(i), N);
    } else {
      k0 = wavenumber(static_cast<int>(i) / N, N);
      k1 = wavenumber(static_cast<int>(i) % N, N);
    }
    if (std::abs(k0) > kmax || std::abs(k1) > kmax)
      tail = std::max(tail, std::abs(F.coeffs[i]));
  }
  return tail;
}

double energy_from_spectrum(const SpectralField& F, const ModelParams& params) {
  const TorusGrid& g = F.grid;
  const int N = g.points_per_axis;
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    int k0, k1 = 0;
    if (g.d == 1) {
      k0 = wavenumber(static_cast<int>(i), N);
    } else {
      k0 = wavenumber(static_cast<int>(i) / N, N);
      k1 = wavenumber(static_cast<int>(i) % N, N);
    }
    const double k2 = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1;
    if (k2 == 0.0) continue;
    const double w = 2.0 * std::numbers::pi * std::sqrt(k2);
    acc += params.cds * std::pow(w, params.s - params.d) * std::norm(F.coeffs[i]);
  }
  return acc;
}

}  // namespace

void Accumulator::add(double integrand, double dt) {
  value += dt * integrand;
  if (std::isfinite(last_integrand)) slack += 0.5 * dt * std::abs(integrand - last_integrand);
  last_integrand = integrand;
}

DiagnosticsRecord record(const Field& f, const ModelParams& params, double t,
                         const std::vector<double>& p_list) {
  DiagnosticsRecord r;
  r.time = t;
  r.mass = f.mean();
  for (double p : p_list) r.lp_norms[p] = lp_norm(f, p);
  if (!r.lp_norms.count(1.0)) r.lp_norms[1.0] = lp_norm(f, 1.0);
  if (!r.lp_norms.count(2.0)) r.lp_norms[2.0] = lp_norm(f, 2.0);
  r.linf = std::abs(f.max()) > std::abs(f.min()) ? std::abs(f.max()) : std::abs(f.min());
  r.min_value = f.min();
  r.max_value = f.max();
  r.argmin = f.argmin();
  r.argmax = f.argmax();
  SpectralField F = forward_transform(f);
  r.spectral_tail = spectral_tail(F);
  r.energy = energy_from_spectrum(F, params);
  return r;
}

void accumulate_dissipation(DissipationLedger& ledger, const Field& f, const ModelParams& params,
                            double p, double dt) {
  const double sgn = params.regime == Regime::Clogged ? -1.0 : 1.0;
  const double m = params.m;
  const double weight_exp = p - 1.0 + sgn * m;  // mu^{p-1 -+ m}
  const Field frac = frac_laplacian_spectral(f, params.alpha);

  // Theorem middle term, with the x^0/0 = log x convention on the boundary.
  double dval;
  std::vector<double> integrand(f.values.size());
  if (std::abs(weight_exp) < 1e-12) {
    const double pref = p * (p - 1.0) * params.cds;  // limit of p(p-1)/(p -+ m - 1) * (...) form
    for (std::size_t i = 0; i < f.values.size(); ++i)
      integrand[i] = pref * std::log(std::max(f.values[i], 1e-300)) * frac.values[i];
  } else {
    const double pref = p * (p - 1.0) / weight_exp * params.cds;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      integrand[i] = pref * std::pow(std::max(f.values[i], 0.0), weight_exp) * frac.values[i];
  }
  dval = integral(integrand);
  ledger.dissipation[p].add(dval, dt);

  // Stroock-Varopoulos lower-bound form.
  const double half_exp = (p + sgn * m) / 2.0;
  Field powf(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    powf.values[i] = std::pow(std::max(f.values[i], 0.0), half_exp);
  const double sv = gagliardo_seminorm(powf, params.alpha / 2.0);
  ledger.sv[p].add(sv * sv, dt);
}

void accumulate_energy_flux(DissipationLedger& ledger, const Field& f, const ModelParams& params,
                            double dt) {
  const double sgn = params.regime == Regime::Clogged ? -1.0 : 1.0;
  VectorField v = riesz_velocity(f, params);
  std::vector<double> integrand(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double v2 = v.components[0].values[i] * v.components[0].values[i];
    if (params.d == 2) v2 += v.components[1].values[i] * v.components[1].values[i];
    integrand[i] = v2 * std::pow(std::max(f.values[i], 1e-300), sgn * params.m);
  }
  ledger.flux.add(integral(integrand), dt);
}

double gagliardo_seminorm(const Field& f, double order) {
  const TorusGrid& g = f.grid;
  if (!(order > -g.d / 2.0 && order <= 1.0))
    throw validation_error("gagliardo_seminorm: order must lie in (-d/2, 1]");
  SpectralField F = forward_transform(f);
  const int N = g.points_per_axis;
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    int k0, k1 = 0;
    if (g.d == 1) {
      k0 = wavenumber(static_cast<int>(i), N);
    } else {
      k0 = wavenumber(static_cast<int>(i) / N, N);
      k1 = wavenumber(static_cast<int>(i) % N, N);
    }
    const double k2 = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1;
    if (k2 == 0.0) continue;
    acc += std::pow(2.0 * std::numbers::pi * std::sqrt(k2), 2.0 * order) * std::norm(F.coeffs[i]);
  }
  return std::sqrt(acc);
}

PowerLawFit fit_powerlaw(const std::vector<double>& times, const std::vector<double>& values,
                         double t_lo, double t_hi) {
  if (times.size() != values.size())
    throw validation_error("fit_powerlaw: times/values size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > t_lo && times[i] < t_hi) {
      if (!(values[i] > 0.0))
        throw validation_error("fit_powerlaw: values inside the window must be positive");
      lx.push_back(std::log(times[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  if (lx.size() < 5)
    throw validation_error("fit_powerlaw: need at least 5 samples strictly inside the window, have " +
                           std::to_string(lx.size()));
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double pred = fit.exponent * lx[i] + std::log(fit.prefactor);
    ss_res += (ly[i] - pred) * (ly[i] - pred);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace nlpm
