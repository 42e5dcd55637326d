#pragma once

#include "ssrf/filter_grid.hpp"

namespace ssrf {

enum class Axis { X, Y };

enum class NormKind { DerivX, DerivY, DcUnit };

/// A filter brought to canonical amplitude: derivative-like filters respond
/// with 1 to their matched shift-adjusted first-order monomial, smoothing-like
/// filters respond with 1 to the constant after DC compensation.
struct NormalizedFilter {
  FilterGrid grid;
  NormKind kind = NormKind::DerivX;
  double scale_applied = 1.0;  // divisor applied to the input
  double dc_constant = 0.0;    // subtracted constant (0 for DerivX/DerivY)
};

/// Rescale a derivative-like filter so its response to the shift-adjusted
/// first-order monomial along the given axis equals 1.  The offset is the
/// unweighted mean of |h|.  Throws when that response magnitude is <= 1e-9.
/// A negative response flips the filter's contrast.
NormalizedFilter normalize_derivative(const FilterGrid& h, Axis axis);

/// Find the constant C minimizing det V(|h - C|) over C in [min(h), max(h)]
/// (33-point coarse scan plus golden-section refinement to |dC| < 1e-7),
/// subtract it, and divide by the DC response so the result responds with 1
/// to the constant function.  Throws for constant input or when the
/// post-subtraction DC response magnitude is < 1e-9.
NormalizedFilter dc_compensate(const FilterGrid& h);

}  // namespace ssrf
