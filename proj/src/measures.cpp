#include "ssrf/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace ssrf {

WeightSpec WeightSpec::for_family(Family family, double sigma0) {
  switch (family) {
    case Family::DyPlus: return {WeightShape::AbsDy, DiffVariant::Plus, sigma0};
    case Family::DxMinus: return {WeightShape::AbsDx, DiffVariant::Minus, sigma0};
    case Family::DyMinus: return {WeightShape::AbsDy, DiffVariant::Minus, sigma0};
    case Family::DxPlus: return {WeightShape::AbsDx, DiffVariant::Plus, sigma0};
    case Family::DxCentered: return {WeightShape::AbsDx, DiffVariant::Centered, sigma0};
    case Family::DyCentered: return {WeightShape::AbsDy, DiffVariant::Centered, sigma0};
    case Family::Smooth: return {WeightShape::Smooth, DiffVariant::Centered, sigma0};
    default:
      throw std::invalid_argument("no weighting shape is defined for this family");
  }
}

double l1_norm(const FilterGrid& h) {
  double sum = 0.0;
  for (double v : h.data()) sum += std::abs(v);
  return sum;
}

namespace {

Family weight_family(WeightShape shape, DiffVariant variant) {
  if (shape == WeightShape::AbsDx) {
    switch (variant) {
      case DiffVariant::Plus: return Family::DxPlus;
      case DiffVariant::Minus: return Family::DxMinus;
      case DiffVariant::Centered: return Family::DxCentered;
    }
  }
  switch (variant) {
    case DiffVariant::Plus: return Family::DyPlus;
    case DiffVariant::Minus: return Family::DyMinus;
    case DiffVariant::Centered: return Family::DyCentered;
  }
  throw std::logic_error("unreachable");
}

/// The weighting kernel on the measured filter's own support.
FilterGrid weight_grid(const WeightSpec& w, int radius_x, int radius_y) {
  if (w.sigma0 <= 0.0) throw std::domain_error("weighted spread requires sigma0 > 0");
  const ScalePair s{w.sigma0, w.sigma0};
  if (w.shape == WeightShape::Smooth) return disc_gauss_2d(s, radius_x, radius_y);
  FilterGrid g = ideal_filter({weight_family(w.shape, w.variant), s, 0.0}, radius_x, radius_y);
  for (double& v : g.data()) v = std::abs(v);
  return g;
}

}  // namespace

SpreadMeasure spread(const FilterGrid& h, const WeightSpec& weight) {
  const bool weighted = weight.shape != WeightShape::None;
  FilterGrid w;
  if (weighted) w = weight_grid(weight, h.radius_x(), h.radius_y());

  double m0 = 0.0, mx = 0.0, my = 0.0, mxx = 0.0, mxy = 0.0, myy = 0.0;
  for (int y = -h.radius_y(); y <= h.radius_y(); ++y) {
    for (int x = -h.radius_x(); x <= h.radius_x(); ++x) {
      const double a = std::abs(h.at(x, y)) * (weighted ? w.at(x, y) : 1.0);
      m0 += a;
      mx += a * x;
      my += a * y;
      mxx += a * x * x;
      mxy += a * x * y;
      myy += a * y * y;
    }
  }
  if (m0 <= 1e-300) throw std::runtime_error("spread: degenerate (weighted absolute mass is zero)");

  SpreadMeasure out;
  out.mean = {mx / m0, my / m0};
  out.cov.xx = mxx / m0 - out.mean.x * out.mean.x;
  out.cov.xy = mxy / m0 - out.mean.x * out.mean.y;
  out.cov.yy = myy / m0 - out.mean.y * out.mean.y;
  return out;
}

double respond_to_monomial(const FilterGrid& h, int a, int b, const Vec2& offset) {
  if (a < 0 || b < 0 || a + b > 2)
    throw std::domain_error("respond_to_monomial: monomial order must satisfy 0 <= a+b <= 2");

  auto power = [](double v, int p) { return p == 0 ? 1.0 : (p == 1 ? v : v * v); };
  double sum = 0.0;
  for (int y = -h.radius_y(); y <= h.radius_y(); ++y)
    for (int x = -h.radius_x(); x <= h.radius_x(); ++x)
      sum += h.at(x, y) * power(x - offset.x, a) * power(y - offset.y, b);
  return sum;
}

Mat2 cont_weighted_variance(ContKernel kind, const ScalePair& scales) {
  if (scales.sigma_x <= 0.0 || scales.sigma_y <= 0.0)
    throw std::domain_error("cont_weighted_variance: scales must be positive");
  const double sx2 = scales.sigma_x * scales.sigma_x;
  const double sy2 = scales.sigma_y * scales.sigma_y;
  Mat2 v;
  switch (kind) {
    case ContKernel::Gauss:
      v.xx = sx2 / 2.0;
      v.yy = sy2 / 2.0;
      break;
    case ContKernel::AbsGx:
      v.xx = 3.0 * sx2 / 2.0;
      v.yy = sy2 / 2.0;
      break;
    case ContKernel::AbsGy:
      v.xx = sx2 / 2.0;
      v.yy = 3.0 * sy2 / 2.0;
      break;
  }
  return v;
}

}  // namespace ssrf
