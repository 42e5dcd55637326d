#pragma once

#include "ssrf/filter_grid.hpp"
#include "ssrf/kernels.hpp"

namespace ssrf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Symmetric 2x2 matrix.
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
};

/// First and second central moments of |h| (optionally weighted): the mean
/// vector in grid units and the covariance matrix in grid units squared.
struct SpreadMeasure {
  Vec2 mean;
  Mat2 cov;
};

enum class WeightShape { None, Smooth, AbsDx, AbsDy };
enum class DiffVariant { Plus, Minus, Centered };

/// Shape of the spatial weighting kernel used for weighted spread measures.
/// The weight is built from the idealized-kernel family matching the shape,
/// at scales (sigma0, sigma0), on the measured filter's own support.
struct WeightSpec {
  WeightShape shape = WeightShape::None;
  DiffVariant variant = DiffVariant::Centered;
  double sigma0 = 1.0;

  static WeightSpec none() { return {}; }

  /// The per-family weighting shape: families 1/3 -> |dy+- T|,
  /// 2/4 -> |dx-+ T|, 5 -> |dx T|, 6 -> |dy T|, 8 -> T.
  /// Throws for families 7 and 9, which have no variance-based rule.
  static WeightSpec for_family(Family family, double sigma0);
};

/// Discrete l1-norm, sum of |h|.
double l1_norm(const FilterGrid& h);

/// Mean and covariance of |h(p)| * w(p) over the grid, with w == 1 for
/// WeightShape::None.  Throws when the weighted absolute mass is <= 1e-300.
SpreadMeasure spread(const FilterGrid& h, const WeightSpec& weight = WeightSpec::none());

/// Response of the filter at the origin to the shift-adjusted monomial
/// (x - offset.x)^a (y - offset.y)^b under the correlation-orientation
/// convention: sum_{m,n} h(m,n) (m - offset.x)^a (n - offset.y)^b.
/// Requires a, b >= 0 and a + b <= 2.
double respond_to_monomial(const FilterGrid& h, int a, int b, const Vec2& offset);

enum class ContKernel { Gauss, AbsGx, AbsGy };

/// Closed-form self-weighted variance of the named continuous kernel:
/// diag(sx^2/2, sy^2/2) for the Gaussian, diag(3 sx^2/2, sy^2/2) for |g_x|
/// and diag(sx^2/2, 3 sy^2/2) for |g_y|.  Requires positive scales.
Mat2 cont_weighted_variance(ContKernel kind, const ScalePair& scales);

}  // namespace ssrf
