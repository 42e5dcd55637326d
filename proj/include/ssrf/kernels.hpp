#pragma once

#include <vector>

#include "ssrf/filter_grid.hpp"

namespace ssrf {

/// Scale parameters (standard deviations, in grid units) along the two
/// coordinate axes.  A value of 0 denotes the exact discrete delta limit.
struct ScalePair {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};

/// The nine idealized receptive-field families: a small-support difference
/// operator composed with the discrete analogue of the Gaussian kernel,
/// plus the sharpening (7) and pure smoothing (8) forms.
enum class Family : int {
  DyPlus = 1,
  DxMinus = 2,
  DyMinus = 3,
  DxPlus = 4,
  DxCentered = 5,
  DyCentered = 6,
  Sharpen = 7,
  Smooth = 8,
  DxyMixed = 9,
};

/// A tagged idealized-filter family together with its parameters.
/// gamma is meaningful for Family::Sharpen only and must be 0 otherwise.
struct IdealizedSpec {
  Family family = Family::Smooth;
  ScalePair scales;
  double gamma = 0.0;
};

/// Small-support difference operators (computational molecules).
enum class DiffOp {
  DxPlus,
  DxMinus,
  DyPlus,
  DyMinus,
  Dx,
  Dy,
  Dxx,
  Dxy,
  Dyy,
  Lap5,
};

/// Modified Bessel function of integer order, I_n(x), for x >= 0, by direct
/// power series summation.  Relative accuracy <= 1e-13 for x <= 25, n <= 32.
/// Throws std::domain_error for negative n or x.
double bessel_i(int n, double x);

/// 1-D discrete analogue of the Gaussian kernel: entry at offset n equals
/// e^{-sigma^2} I_{|n|}(sigma^2), returned as a vector of length 2*radius+1
/// (offset n stored at index n + radius).  sigma = 0 yields the unit impulse.
std::vector<double> disc_gauss_1d(double sigma, int radius);

/// Separable 2-D discrete analogue of the Gaussian kernel, the outer product
/// of the two 1-D kernels.
FilterGrid disc_gauss_2d(const ScalePair& scales, int radius_x, int radius_y);

/// 3x3 computational molecule of the given difference operator, laid out in
/// correlation orientation: sum_{x,y} molecule(x,y) * f(x,y) reproduces the
/// operator's action on f at the origin.
FilterGrid diff_molecule(DiffOp op);

/// Full discrete convolution; output radii are the sums of the input radii.
FilterGrid apply_op(const FilterGrid& op_grid, const FilterGrid& target);

/// Restrict (or zero-extend) a grid to the given radii.
FilterGrid crop_to(const FilterGrid& g, int radius_x, int radius_y);

/// Idealized receptive-field model on the requested support.  The smoothing
/// kernel is built on radii enlarged by the molecule radius plus 2, the
/// molecule is applied by full convolution, and the result is cropped with
/// no renormalization.  Sharpen requires isotropic scales and returns the
/// unit impulse minus gamma times the 5-point-Laplacian-of-Gaussian.
FilterGrid ideal_filter(const IdealizedSpec& spec, int radius_x, int radius_y);

}  // namespace ssrf
