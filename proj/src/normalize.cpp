#include "ssrf/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssrf/measures.hpp"

namespace ssrf {

NormalizedFilter normalize_derivative(const FilterGrid& h, Axis axis) {
  const SpreadMeasure sm = spread(h);
  const int a = axis == Axis::X ? 1 : 0;
  const int b = axis == Axis::X ? 0 : 1;
  const double response = respond_to_monomial(h, a, b, sm.mean);
  if (std::abs(response) <= 1e-9)
    throw std::runtime_error(
        "normalize_derivative: near-zero monomial response, filter does not "
        "resemble the requested derivative");

  NormalizedFilter out;
  out.grid = (1.0 / response) * h;
  out.kind = axis == Axis::X ? NormKind::DerivX : NormKind::DerivY;
  out.scale_applied = response;
  out.dc_constant = 0.0;
  return out;
}

namespace {

double det_spread(const FilterGrid& h, double c) {
  FilterGrid shifted = h;
  for (double& v : shifted.data()) v -= c;
  return spread(shifted).cov.det();
}

/// Golden-section minimization of f on [a, b], run until b - a < tol.
template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

NormalizedFilter dc_compensate(const FilterGrid& h) {
  const auto [min_it, max_it] = std::minmax_element(h.data().begin(), h.data().end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo)) throw std::invalid_argument("dc_compensate: constant filter");

  // The objective is continuous but only piecewise smooth in C (kinks where
  // coefficients cross C), so bracket with a coarse scan before refining.
  constexpr int kScanPoints = 33;
  int best = 0;
  double best_val = det_spread(h, lo);
  for (int i = 1; i < kScanPoints; ++i) {
    const double c = lo + (hi - lo) * i / (kScanPoints - 1);
    const double val = det_spread(h, c);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  const double step = (hi - lo) / (kScanPoints - 1);
  const double a = std::max(lo, lo + (best - 1) * step);
  const double b = std::min(hi, lo + (best + 1) * step);
  // refine well past the 1e-7 contract; the division by the DC response
  // amplifies any slack in C across the support
  const double c_hat = golden_min([&](double c) { return det_spread(h, c); }, a, b, 1e-10);

  FilterGrid shifted = h;
  for (double& v : shifted.data()) v -= c_hat;
  const double dc = respond_to_monomial(shifted, 0, 0, {0.0, 0.0});
  if (std::abs(dc) < 1e-9)
    throw std::runtime_error("dc_compensate: degenerate DC response after subtraction");

  NormalizedFilter out;
  out.grid = (1.0 / dc) * shifted;
  out.kind = NormKind::DcUnit;
  out.scale_applied = dc;
  out.dc_constant = c_hat;
  return out;
}

}  // namespace ssrf
