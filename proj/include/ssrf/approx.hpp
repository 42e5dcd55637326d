#pragma once

#include <utility>
#include <vector>

#include "ssrf/filter_grid.hpp"

namespace ssrf {

/// Closed-form least-squares coefficients of f ~ a * f_prime + b over the
/// grid cells, and the l2 norm of the gap.
struct AffineFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
};

/// Best affine match of a filter against a reference set.  family_index is
/// 1-based position in the reference list; rank holds every candidate ordered
/// by residual (ties broken by lowest index, failed candidates last).
struct AffineMatch {
  int family_index = 0;
  double a = 0.0;
  double b = 0.0;
  double residual_l2 = 0.0;
  std::vector<std::pair<int, double>> rank;
};

/// Least squares over grid cells: a = cov(f, f') / var(f'),
/// b = mean(f) - a * mean(f').  Throws when var(f') < 1e-15 or the supports
/// differ.
AffineFit affine_fit(const FilterGrid& f, const FilterGrid& f_prime);

/// Classify a filter by its closest affine match a*f'+b among the reference
/// filters.  A candidate that fails to fit is ranked last.
AffineMatch classify(const FilterGrid& f, const std::vector<FilterGrid>& reference);

}  // namespace ssrf
