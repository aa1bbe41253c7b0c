#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nlpm {

/// Uniform periodic grid on the unit torus [-1/2, 1/2)^d, d in {1,2}.
/// Node j along an axis sits at x_j = -1/2 + j/N.
struct TorusGrid {
  int d = 1;
  int points_per_axis = 8;

  double spacing() const { return 1.0 / points_per_axis; }
  std::size_t total_points() const {
    std::size_t n = points_per_axis;
    return d == 1 ? n : n * n;
  }
  double cell_volume() const {
    double h = spacing();
    return d == 1 ? h : h * h;
  }
  /// Physical coordinate of node index i along one axis.
  double coord(int i) const { return -0.5 + static_cast<double>(i) / points_per_axis; }

  /// Row-major flattening (axis 0 is the slow index in 2-D).
  std::size_t flat(int i0, int i1 = 0) const {
    return d == 1 ? static_cast<std::size_t>(i0)
                  : static_cast<std::size_t>(i0) * points_per_axis + i1;
  }

  bool operator==(const TorusGrid&) const = default;
};

TorusGrid make_grid(int d, int N);

/// Real density sample on a torus grid.
struct Field {
  TorusGrid grid;
  std::vector<double> values;

  Field() = default;
  Field(const TorusGrid& g, double fill = 0.0) : grid(g), values(g.total_points(), fill) {}

  double min() const;
  double max() const;
  double mean() const;
  std::size_t argmin() const;
  std::size_t argmax() const;
  bool all_finite() const;
};

/// Fourier coefficients of a real field, FFT index order. The stored
/// coefficient c(k) is the coefficient of e^{2*pi*i k.x} in physical
/// coordinates, so c(0) equals the mean of the samples.
struct SpectralField {
  TorusGrid grid;
  std::vector<std::complex<double>> coeffs;

  SpectralField() = default;
  explicit SpectralField(const TorusGrid& g) : grid(g), coeffs(g.total_points()) {}
};

/// Integer wavenumber of an FFT index, in (-N/2, N/2].
inline int wavenumber(int idx, int N) { return idx <= N / 2 ? idx : idx - N; }

struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace nlpm
