#pragma once

#include "nlpm/grid.hpp"

namespace nlpm {

/// Forward transform. Normalized so coeffs[0] is the mean of the samples,
/// with the phase fixed so that coefficients refer to physical coordinates
/// x in [-1/2, 1/2)^d (cos(2*pi*x) maps to 1/2 at modes +-1).
SpectralField forward_transform(const Field& f);

/// Inverse of forward_transform. Checks Hermitian symmetry (tolerance 1e-10
/// relative) and throws validation_error on violation.
Field inverse_transform(const SpectralField& F);

/// Inverse without the symmetry check; takes the real part. Used in the
/// time-stepping hot path where coefficients come from our own transforms.
Field inverse_transform_unchecked(const SpectralField& F);

}  // namespace nlpm
