#include "nlpm/operators.hpp"

#include "nlpm/probes.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace nlpm;

namespace {

constexpr double kPi = std::numbers::pi;

Field cosine_mode(const TorusGrid& g, int k, double amp, double offset) {
  Field f(g);
  const int N = g.points_per_axis;
  for (int i0 = 0; i0 < N; ++i0) {
    const double v = offset + amp * std::cos(2.0 * kPi * k * g.coord(i0));
    if (g.d == 1)
      f.values[i0] = v;
    else
      for (int i1 = 0; i1 < N; ++i1) f.values[g.flat(i0, i1)] = v;
  }
  return f;
}

double rel_l2_error(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
    den += b.values[i] * b.values[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("forward/inverse round trip") {
  for (int d : {1, 2}) {
    TorusGrid g = make_grid(d, d == 1 ? 64 : 16);
    Field f = random_band_limited(g, 42 + d);
    Field back = inverse_transform(forward_transform(f));
    for (std::size_t i = 0; i < f.values.size(); ++i)
      CHECK(back.values[i] == doctest::Approx(f.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("transform conventions: mean, single mode, Parseval") {
  TorusGrid g = make_grid(1, 32);
  Field f = cosine_mode(g, 1, 1.0, 0.25);
  SpectralField F = forward_transform(f);
  CHECK(F.coeffs[0].real() == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(F.coeffs[0].imag() == doctest::Approx(0.0));
  // Physical-coordinate convention: cos(2 pi x) has coefficient 1/2 at k = +-1.
  CHECK(F.coeffs[1].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(F.coeffs[1].imag() == doctest::Approx(0.0));
  CHECK(F.coeffs[31].real() == doctest::Approx(0.5).epsilon(1e-12));

  double phys = 0.0;
  for (double v : f.values) phys += v * v;
  phys /= f.values.size();
  double spec = 0.0;
  for (const auto& c : F.coeffs) spec += std::norm(c);
  CHECK(phys == doctest::Approx(spec).epsilon(1e-13));
}

TEST_CASE("transform linearity") {
  TorusGrid g = make_grid(2, 16);
  Field a = random_band_limited(g, 7);
  Field b = random_band_limited(g, 8);
  Field combo(g);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    combo.values[i] = 2.0 * a.values[i] - 3.0 * b.values[i];
  SpectralField A = forward_transform(a), B = forward_transform(b), C = forward_transform(combo);
  for (std::size_t i = 0; i < C.coeffs.size(); ++i)
    CHECK(std::abs(C.coeffs[i] - (2.0 * A.coeffs[i] - 3.0 * B.coeffs[i])) < 1e-12);
}

TEST_CASE("inverse_transform rejects non-Hermitian input") {
  TorusGrid g = make_grid(1, 16);
  SpectralField F = forward_transform(random_band_limited(g, 3));
  F.coeffs[2] += std::complex<double>(0.5, 0.5);  // break conjugate symmetry
  CHECK_THROWS_AS(inverse_transform(F), validation_error);
  CHECK_NOTHROW(inverse_transform_unchecked(F));
}

TEST_CASE("potential constant special values") {
  // d=2, s=1: 4^{1/2} Gamma(1/2) pi / Gamma(1/2) = 2 pi.
  CHECK(compute_cds(2, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  // d=1, s=1/2: 4^{1/4} Gamma(1/4) sqrt(pi) / Gamma(1/4) = sqrt(2 pi).
  CHECK(compute_cds(1, 0.5) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  // s=0 branch: Gamma(d/2) (4 pi)^{d/2} / 2.
  CHECK(compute_cds(1, 0.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(compute_cds(2, 0.0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("make_params validates the parameter domain") {
  CHECK_THROWS_AS(make_params(1, 1.0, 0.5, Regime::FastDiffusion, 1e-3), validation_error);
  CHECK_THROWS_AS(make_params(1, -0.1, 0.5, Regime::FastDiffusion, 1e-3), validation_error);
  CHECK_THROWS_AS(make_params(2, 2.0, 0.5, Regime::FastDiffusion, 1e-3), validation_error);
  CHECK_THROWS_AS(make_params(1, 0.5, 1.0, Regime::FastDiffusion, 1e-3), validation_error);
  CHECK_THROWS_AS(make_params(1, 0.5, -0.5, Regime::Clogged, 1e-3), validation_error);
  CHECK_THROWS_AS(make_params(1, 0.5, 0.5, Regime::FastDiffusion, -1e-3), validation_error);
  ModelParams p = make_params(1, 0.5, 0.5, Regime::FastDiffusion, 1e-3);
  CHECK(p.alpha == doctest::Approx(1.5));
  CHECK(p.cds == doctest::Approx(std::sqrt(2.0 * kPi)));
  CHECK(p.cdalpha > 0.0);
}

TEST_CASE("spectral fractional Laplacian eigenfunctions") {
  TorusGrid g = make_grid(1, 64);
  for (double alpha : {0.7, 1.5, 2.0}) {
    for (int k : {1, 3, 7}) {
      Field f = cosine_mode(g, k, 1.0, 2.0);
      Field out = frac_laplacian_spectral(f, alpha);
      const double lam = std::pow(2.0 * kPi * k, alpha);
      for (int i = 0; i < 64; ++i) {
        const double expect = lam * std::cos(2.0 * kPi * k * g.coord(i));
        CHECK(out.values[i] == doctest::Approx(expect).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(frac_laplacian_spectral(cosine_mode(g, 1, 1.0, 0.0), 2.5), validation_error);
}

TEST_CASE("lattice-sum operator matches the spectral one (d=1)") {
  TorusGrid g = make_grid(1, 256);
  std::mt19937_64 rng(11);
  for (double alpha : {1.2, 1.5, 1.8}) {
    Field f = random_band_limited(g, rng(), 32);
    Field spec = frac_laplacian_spectral(f, alpha);
    Field lat = frac_laplacian_latticesum(f, alpha, 6);
    CHECK(rel_l2_error(lat, spec) < 1e-3);
  }
}

TEST_CASE("lattice-sum operator matches the spectral one (d=2)") {
  TorusGrid g = make_grid(2, 64);
  for (double alpha : {1.0, 1.4}) {
    Field f = random_band_limited(g, 1234, 8);
    Field spec = frac_laplacian_spectral(f, alpha);
    Field lat = frac_laplacian_latticesum(f, alpha, 4);
    CHECK(rel_l2_error(lat, spec) < 1e-2);
  }
}

TEST_CASE("lattice-sum operator annihilates constants and is linear") {
  TorusGrid g = make_grid(1, 64);
  Field c(g, 3.7);
  Field out = frac_laplacian_latticesum(c, 1.5, 6);
  for (double v : out.values) CHECK(std::abs(v) < 1e-10);

  Field a = random_band_limited(g, 5, 8);
  Field b = random_band_limited(g, 6, 8);
  Field combo(g);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    combo.values[i] = 1.5 * a.values[i] + 0.5 * b.values[i];
  Field la = frac_laplacian_latticesum(a, 1.5, 6);
  Field lb = frac_laplacian_latticesum(b, 1.5, 6);
  Field lc = frac_laplacian_latticesum(combo, 1.5, 6);
  double scale = 0.0;
  for (double v : lc.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < lc.values.size(); ++i)
    CHECK(lc.values[i] ==
          doctest::Approx(1.5 * la.values[i] + 0.5 * lb.values[i]).epsilon(1e-10).scale(scale));
}

TEST_CASE("point evaluation agrees with the full-field lattice sum") {
  for (int d : {1, 2}) {
    TorusGrid g = make_grid(d, d == 1 ? 64 : 32);
    Field f = random_band_limited(g, 99 + d, d == 1 ? 8 : 4);
    const double alpha = 1.4;
    const int R = d == 1 ? 6 : 4;
    Field full = frac_laplacian_latticesum(f, alpha, R);
    for (std::size_t idx : {std::size_t(0), f.argmin(), f.argmax()}) {
      const double pt = frac_laplacian_latticesum_at(f, alpha, R, idx);
      CHECK(pt == doctest::Approx(full.values[idx]).epsilon(1e-10));
    }
  }
}

TEST_CASE("calibrated constant tracks the whole-space normalization (d=1)") {
  for (double alpha : {1.2, 1.5, 1.8})
    CHECK(compute_cdalpha(1, alpha) ==
          doctest::Approx(whole_space_cdalpha(1, alpha)).epsilon(1e-3));
}

TEST_CASE("Riesz potential and velocity on a single mode") {
  TorusGrid g = make_grid(1, 64);
  ModelParams params = make_params(1, 0.5, 0.5, Regime::FastDiffusion, 1e-3);
  const int k = 2;
  Field f = cosine_mode(g, k, 1.0, 1.0);
  Field pot = riesz_potential(f, params);
  const double mult = params.cds * std::pow(2.0 * kPi * k, params.s - 1.0);
  for (int i = 0; i < 64; ++i)
    CHECK(pot.values[i] ==
          doctest::Approx(mult * std::cos(2.0 * kPi * k * g.coord(i))).epsilon(1e-10));

  VectorField v = riesz_velocity(f, params);
  for (int i = 0; i < 64; ++i) {
    const double expect = -mult * 2.0 * kPi * k * std::sin(2.0 * kPi * k * g.coord(i));
    CHECK(v.components[0].values[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("2/3-rule dealiasing zeroes the upper third") {
  TorusGrid g = make_grid(1, 32);
  SpectralField F = forward_transform(random_band_limited(g, 17, 15));
  dealias(F);
  for (int i = 0; i < 32; ++i) {
    const int k = wavenumber(i, 32);
    if (std::abs(k) > 32 / 3)
      CHECK(std::abs(F.coeffs[i]) == 0.0);
  }
  // Low modes untouched.
  SpectralField G = forward_transform(random_band_limited(g, 17, 15));
  for (int i = 0; i < 32; ++i)
    if (std::abs(wavenumber(i, 32)) <= 32 / 3)
      CHECK(std::abs(F.coeffs[i] - G.coeffs[i]) < 1e-15);
}
