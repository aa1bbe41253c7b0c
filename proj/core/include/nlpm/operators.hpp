#pragma once

#include "nlpm/fft.hpp"
#include "nlpm/grid.hpp"

#include <array>

namespace nlpm {

enum class Regime { Clogged, FastDiffusion };

/// Model parameters (d, s, m, regime, epsilon) with the derived fractional
/// order alpha = s - d + 2 and the two kernel constants.
struct ModelParams {
  int d = 1;
  double s = 0.5;
  double m = 0.5;
  Regime regime = Regime::FastDiffusion;
  double epsilon = 1e-3;

  double alpha = 0.0;    // s - d + 2
  double cds = 0.0;      // Riesz potential constant
  double cdalpha = 0.0;  // calibrated singular-integral constant of (-Delta)^{alpha/2}
};

ModelParams make_params(int d, double s, double m, Regime regime, double epsilon);

struct VectorField {
  TorusGrid grid;
  std::array<Field, 2> components;  // components[1] unused when d == 1
};

/// Potential constant c_{d,s}: 4^{(d-s)/2} Gamma((d-s)/2) pi^{d/2} / Gamma(s/2)
/// for 0 < s < d, with the separate branch Gamma(d/2) (4 pi)^{d/2} / 2 at s = 0.
double compute_cds(int d, double s);

/// Singular-integral constant of (-Delta)^{alpha/2} on the unit torus,
/// calibrated so the lattice-sum operator reproduces the spectral
/// eigenvalue |2 pi k|^alpha on cosine modes. Cached per (d, alpha).
double compute_cdalpha(int d, double alpha);

/// Closed-form whole-space normalization constant, logged for comparison
/// against the calibrated value.
double whole_space_cdalpha(int d, double alpha);

/// Spectral (-Delta)^{alpha/2}: multiplier |2 pi k|^alpha, zero at k = 0.
Field frac_laplacian_spectral(const Field& f, double alpha);
SpectralField frac_laplacian_spectral(const SpectralField& F, double alpha);

/// Truncated-image singular-integral evaluation of (-Delta)^{alpha/2}, the
/// independent oracle for the spectral operator. Sums images |k|_inf <=
/// image_radius with trapezoidal quadrature in y; the far images are folded
/// into an analytic multiple of (f(x) - mean) and the grid-scale quadrature
/// defect into a Laplacian term with a calibrated coefficient.
Field frac_laplacian_latticesum(const Field& f, double alpha, int image_radius);

/// Single-point evaluation of the lattice-sum operator (used by the
/// extremum-principle checks, which only need the value at an argmin/argmax).
double frac_laplacian_latticesum_at(const Field& f, double alpha, int image_radius,
                                    std::size_t index);

/// g * f with multiplier c_{d,s} |2 pi k|^{s-d} (zero at k = 0).
Field riesz_potential(const Field& f, const ModelParams& params);

/// grad(g * f); each component zero-mean.
VectorField riesz_velocity(const Field& f, const ModelParams& params);

/// 2/3-rule dealiasing: zero all modes with any |k| > N/3 (in place).
void dealias(SpectralField& F);

}  // namespace nlpm
