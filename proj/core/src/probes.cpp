#include "nlpm/probes.hpp"

#include "nlpm/fft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace nlpm {

Field random_band_limited(const TorusGrid& grid, std::uint64_t seed, int max_mode,
                          double min_value, double amplitude) {
  const int N = grid.points_per_axis;
  if (max_mode <= 0) max_mode = std::max(1, N / 8);
  if (max_mode > N / 2 - 1) throw validation_error("random_band_limited: max_mode too large");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SpectralField F(grid);
  const double two_pi = 2.0 * std::numbers::pi;
  (void)two_pi;
  auto put = [&](int k0, int k1) {
    const double decay = 1.0 / (1.0 + static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1);
    const std::complex<double> c(gauss(rng) * decay, gauss(rng) * decay);
    // Store c at +k and conj(c) at -k (Hermitian symmetry -> real field).
    auto wrap = [N](int k) { return (k % N + N) % N; };
    std::size_t ip, im;
    if (grid.d == 1) {
      ip = static_cast<std::size_t>(wrap(k0));
      im = static_cast<std::size_t>(wrap(-k0));
    } else {
      ip = static_cast<std::size_t>(wrap(k0)) * N + wrap(k1);
      im = static_cast<std::size_t>(wrap(-k0)) * N + wrap(-k1);
    }
    F.coeffs[ip] = 0.5 * amplitude * c;
    F.coeffs[im] = 0.5 * amplitude * std::conj(c);
  };
  if (grid.d == 1) {
    for (int k = 1; k <= max_mode; ++k) put(k, 0);
  } else {
    // One representative per conjugate pair: k0 > 0, or k0 == 0 with k1 > 0.
    for (int k0 = 0; k0 <= max_mode; ++k0)
      for (int k1 = -max_mode; k1 <= max_mode; ++k1) {
        if (k0 == 0 && k1 <= 0) continue;
        put(k0, k1);
      }
  }
  Field f = inverse_transform(F);
  const double shift = min_value - f.min();
  for (double& v : f.values) v += shift;
  return f;
}

Field approx_dirac_probe(const TorusGrid& grid, double width, double mass) {
  if (!(width > 0.0)) throw validation_error("approx_dirac_probe: width must be > 0");
  if (!(mass > 0.0)) throw validation_error("approx_dirac_probe: mass must be > 0");
  SpectralField F(grid);
  const int N = grid.points_per_axis;
  const double two_pi = 2.0 * std::numbers::pi;
  const double w2 = width * width;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    int k0, k1 = 0;
    if (grid.d == 1) {
      k0 = wavenumber(static_cast<int>(i), N);
    } else {
      k0 = wavenumber(static_cast<int>(i) / N, N);
      k1 = wavenumber(static_cast<int>(i) % N, N);
    }
    const double k2 = static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1;
    F.coeffs[i] = mass * std::exp(-w2 * two_pi * two_pi * k2);
  }
  return inverse_transform(F);
}

}  // namespace nlpm
