#pragma once

#include "nlpm/grid.hpp"

#include <cstdint>

namespace nlpm {

/// Seeded positive band-limited field: random cosine/sine modes with
/// |k|_inf <= max_mode and 1/(1+|k|^2) amplitude decay, shifted so the
/// minimum equals min_value. max_mode defaults to N/8 so that cubes of the
/// field remain fully resolved.
Field random_band_limited(const TorusGrid& grid, std::uint64_t seed, int max_mode = 0,
                          double min_value = 0.5, double amplitude = 1.0);

/// Periodic heat kernel of the given width centered at the origin, total
/// mass `mass`: the sharply peaked probe for the maximum-principle checks.
Field approx_dirac_probe(const TorusGrid& grid, double width, double mass);

}  // namespace nlpm
