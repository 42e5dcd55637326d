#include "ssrf/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssrf {

double bessel_i(int n, double x) {
  if (n < 0) throw std::domain_error("bessel_i: order must be non-negative");
  if (x < 0.0) throw std::domain_error("bessel_i: argument must be non-negative");

  // First term (x/2)^n / n!, built incrementally to avoid overflow.
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  for (int k = 1; term != 0.0; ++k) {
    term *= (half * half) / (static_cast<double>(k) * (n + k));
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

std::vector<double> disc_gauss_1d(double sigma, int radius) {
  if (sigma < 0.0) throw std::domain_error("disc_gauss_1d: sigma must be non-negative");
  if (radius < 0) throw std::domain_error("disc_gauss_1d: radius must be non-negative");

  std::vector<double> out(2 * radius + 1, 0.0);
  if (sigma == 0.0) {
    out[radius] = 1.0;
    return out;
  }
  const double s = sigma * sigma;
  const double scale = std::exp(-s);
  for (int n = 0; n <= radius; ++n) {
    const double v = scale * bessel_i(n, s);
    out[radius + n] = v;
    out[radius - n] = v;
  }
  return out;
}

FilterGrid disc_gauss_2d(const ScalePair& scales, int radius_x, int radius_y) {
  const std::vector<double> kx = disc_gauss_1d(scales.sigma_x, radius_x);
  const std::vector<double> ky = disc_gauss_1d(scales.sigma_y, radius_y);
  FilterGrid out(radius_x, radius_y);
  for (int y = -radius_y; y <= radius_y; ++y)
    for (int x = -radius_x; x <= radius_x; ++x)
      out.at(x, y) = kx[x + radius_x] * ky[y + radius_y];
  return out;
}

FilterGrid diff_molecule(DiffOp op) {
  FilterGrid m(1, 1);
  switch (op) {
    case DiffOp::DxPlus:
      m.at(1, 0) = 1.0;
      m.at(0, 0) = -1.0;
      break;
    case DiffOp::DxMinus:
      m.at(0, 0) = 1.0;
      m.at(-1, 0) = -1.0;
      break;
    case DiffOp::DyPlus:
      m.at(0, 1) = 1.0;
      m.at(0, 0) = -1.0;
      break;
    case DiffOp::DyMinus:
      m.at(0, 0) = 1.0;
      m.at(0, -1) = -1.0;
      break;
    case DiffOp::Dx:
      m.at(1, 0) = 0.5;
      m.at(-1, 0) = -0.5;
      break;
    case DiffOp::Dy:
      m.at(0, 1) = 0.5;
      m.at(0, -1) = -0.5;
      break;
    case DiffOp::Dxx:
      m.at(-1, 0) = 1.0;
      m.at(0, 0) = -2.0;
      m.at(1, 0) = 1.0;
      break;
    case DiffOp::Dxy:
      m.at(1, 1) = 0.25;
      m.at(-1, -1) = 0.25;
      m.at(-1, 1) = -0.25;
      m.at(1, -1) = -0.25;
      break;
    case DiffOp::Dyy:
      m.at(0, -1) = 1.0;
      m.at(0, 0) = -2.0;
      m.at(0, 1) = 1.0;
      break;
    case DiffOp::Lap5:
      m = diff_molecule(DiffOp::Dxx) + diff_molecule(DiffOp::Dyy);
      break;
  }
  return m;
}

FilterGrid apply_op(const FilterGrid& op_grid, const FilterGrid& target) {
  FilterGrid out(op_grid.radius_x() + target.radius_x(),
                 op_grid.radius_y() + target.radius_y());
  for (int ay = -op_grid.radius_y(); ay <= op_grid.radius_y(); ++ay) {
    for (int ax = -op_grid.radius_x(); ax <= op_grid.radius_x(); ++ax) {
      const double a = op_grid.at(ax, ay);
      if (a == 0.0) continue;
      for (int by = -target.radius_y(); by <= target.radius_y(); ++by)
        for (int bx = -target.radius_x(); bx <= target.radius_x(); ++bx)
          out.at(ax + bx, ay + by) += a * target.at(bx, by);
    }
  }
  return out;
}

FilterGrid crop_to(const FilterGrid& g, int radius_x, int radius_y) {
  FilterGrid out(radius_x, radius_y);
  const int sx = std::min(radius_x, g.radius_x());
  const int sy = std::min(radius_y, g.radius_y());
  for (int y = -sy; y <= sy; ++y)
    for (int x = -sx; x <= sx; ++x)
      out.at(x, y) = g.at(x, y);
  return out;
}

namespace {

DiffOp family_molecule(Family family) {
  switch (family) {
    case Family::DyPlus: return DiffOp::DyPlus;
    case Family::DxMinus: return DiffOp::DxMinus;
    case Family::DyMinus: return DiffOp::DyMinus;
    case Family::DxPlus: return DiffOp::DxPlus;
    case Family::DxCentered: return DiffOp::Dx;
    case Family::DyCentered: return DiffOp::Dy;
    case Family::DxyMixed: return DiffOp::Dxy;
    default: throw std::invalid_argument("family has no single difference molecule");
  }
}

}  // namespace

FilterGrid ideal_filter(const IdealizedSpec& spec, int radius_x, int radius_y) {
  if (radius_x < 0 || radius_y < 0)
    throw std::domain_error("ideal_filter: radii must be non-negative");
  if (spec.scales.sigma_x < 0.0 || spec.scales.sigma_y < 0.0)
    throw std::domain_error("ideal_filter: scales must be non-negative");
  if (spec.family != Family::Sharpen && spec.gamma != 0.0)
    throw std::invalid_argument("ideal_filter: gamma is only meaningful for the sharpening family");

  switch (spec.family) {
    case Family::Smooth: {
      const FilterGrid t = disc_gauss_2d(spec.scales, radius_x + 2, radius_y + 2);
      return crop_to(t, radius_x, radius_y);
    }
    case Family::Sharpen: {
      if (spec.scales.sigma_x != spec.scales.sigma_y)
        throw std::invalid_argument("ideal_filter: the sharpening model is isotropic");
      if (spec.gamma < 0.0)
        throw std::domain_error("ideal_filter: gamma must be non-negative");
      const FilterGrid t = disc_gauss_2d(spec.scales, radius_x + 3, radius_y + 3);
      const FilterGrid log5 = crop_to(apply_op(diff_molecule(DiffOp::Lap5), t), radius_x, radius_y);
      return FilterGrid::impulse(radius_x, radius_y) - spec.gamma * log5;
    }
    default: {
      const FilterGrid t = disc_gauss_2d(spec.scales, radius_x + 3, radius_y + 3);
      const FilterGrid mol = diff_molecule(family_molecule(spec.family));
      return crop_to(apply_op(mol, t), radius_x, radius_y);
    }
  }
}

}  // namespace ssrf
