#include "nlpm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nlpm {

TorusGrid make_grid(int d, int N) {
  if (d != 1 && d != 2)
    throw validation_error("make_grid: dimension must be 1 or 2, got " + std::to_string(d));
  if (N < 8 || (N & (N - 1)) != 0)
    throw validation_error("make_grid: points_per_axis must be a power of two >= 8, got " +
                           std::to_string(N));
  TorusGrid g;
  g.d = d;
  g.points_per_axis = N;
  return g;
}

double Field::min() const { return *std::min_element(values.begin(), values.end()); }
double Field::max() const { return *std::max_element(values.begin(), values.end()); }

double Field::mean() const {
  double s = std::accumulate(values.begin(), values.end(), 0.0);
  return s / static_cast<double>(values.size());
}

std::size_t Field::argmin() const {
  return static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
}

std::size_t Field::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace nlpm
