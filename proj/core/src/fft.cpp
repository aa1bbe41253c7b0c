#include "nlpm/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace nlpm {

namespace {

// Plans are cached per (d, N, sign). Planning is not thread-safe in FFTW;
// execution through the new-array interface is.
struct PlanKey {
  int d, N, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(d, N, sign) < std::tie(o.d, o.N, o.sign);
  }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

fftw_plan get_plan(const TorusGrid& g, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanKey key{g.d, g.points_per_axis, sign};
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;

  std::vector<std::complex<double>> buf(g.total_points());
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (g.d == 1)
    plan = fftw_plan_dft_1d(g.points_per_axis, p, p, sign, flags);
  else
    plan = fftw_plan_dft_2d(g.points_per_axis, g.points_per_axis, p, p, sign, flags);
  plan_cache.emplace(key, plan);
  return plan;
}

// (-1)^(k0+...+kd) phase relating FFT indices (origin at node 0) to
// physical coordinates (origin at the box center).
inline double phase(const TorusGrid& g, std::size_t flat) {
  int N = g.points_per_axis;
  int sum;
  if (g.d == 1) {
    sum = wavenumber(static_cast<int>(flat), N);
  } else {
    sum = wavenumber(static_cast<int>(flat / N), N) + wavenumber(static_cast<int>(flat % N), N);
  }
  return (sum & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralField forward_transform(const Field& f) {
  if (!f.all_finite()) throw validation_error("forward_transform: non-finite samples");
  const TorusGrid& g = f.grid;
  SpectralField F(g);
  std::vector<std::complex<double>> buf(f.values.begin(), f.values.end());
  fftw_plan plan = get_plan(g, FFTW_FORWARD);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, p, p);
  const double scale = 1.0 / static_cast<double>(g.total_points());
  for (std::size_t i = 0; i < buf.size(); ++i) F.coeffs[i] = buf[i] * (scale * phase(g, i));
  return F;
}

Field inverse_transform_unchecked(const SpectralField& F) {
  const TorusGrid& g = F.grid;
  std::vector<std::complex<double>> buf(F.coeffs.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = F.coeffs[i] * phase(g, i);
  fftw_plan plan = get_plan(g, FFTW_BACKWARD);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, p, p);
  Field f(g);
  for (std::size_t i = 0; i < buf.size(); ++i) f.values[i] = buf[i].real();
  return f;
}

Field inverse_transform(const SpectralField& F) {
  const TorusGrid& g = F.grid;
  const int N = g.points_per_axis;
  double max_abs = 0.0;
  for (const auto& c : F.coeffs) max_abs = std::max(max_abs, std::abs(c));
  const double tol = 1e-10 * std::max(max_abs, 1e-300);

  auto at = [&](int k0, int k1) {
    int i0 = (k0 % N + N) % N;
    int i1 = (k1 % N + N) % N;
    return F.coeffs[g.d == 1 ? i0 : g.flat(i0, i1)];
  };
  for (int i0 = 0; i0 < N; ++i0) {
    int k0 = wavenumber(i0, N);
    if (g.d == 1) {
      if (std::abs(at(k0, 0) - std::conj(at(-k0, 0))) > tol)
        throw validation_error("inverse_transform: Hermitian symmetry violated");
    } else {
      for (int i1 = 0; i1 < N; ++i1) {
        int k1 = wavenumber(i1, N);
        if (std::abs(at(k0, k1) - std::conj(at(-k0, -k1))) > tol)
          throw validation_error("inverse_transform: Hermitian symmetry violated");
      }
    }
  }
  return inverse_transform_unchecked(F);
}

}  // namespace nlpm
