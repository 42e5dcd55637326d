#include "ssrf/fit.hpp"

#include <algorithm>
#include <array>
#include <vector>
#include <cmath>
#include <stdexcept>

#include "ssrf/measures.hpp"

namespace ssrf {

namespace {

constexpr long kEvalCap = 2000;

bool is_x_derivative(Family f) {
  return f == Family::DxMinus || f == Family::DxPlus || f == Family::DxCentered;
}

bool is_y_derivative(Family f) {
  return f == Family::DyPlus || f == Family::DyMinus || f == Family::DyCentered;
}

void require_variance_family(Family f, const char* method) {
  if (!is_x_derivative(f) && !is_y_derivative(f) && f != Family::Smooth)
    throw std::invalid_argument(std::string(method) +
                                ": defined for families 1-6 and 8 only");
}

void validate_bounds(const Bounds1D& b) {
  if (!(b.lo < b.hi) || !(b.tol > 0.0))
    throw std::invalid_argument("search bounds require lo < hi and tol > 0");
}

FilterGrid ideal_r3(Family family, double sx, double sy, double gamma = 0.0) {
  return ideal_filter({family, {sx, sy}, gamma}, kFitSupportRadius, kFitSupportRadius);
}

double norm_diff(const FilterGrid& a, const FilterGrid& b, FitNorm norm) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    acc += norm == FitNorm::L1 ? std::abs(d) : d * d;
  }
  return norm == FitNorm::L1 ? acc : std::sqrt(acc);
}

void fill_residuals(FitResult& r, const FilterGrid& h) {
  const FilterGrid model = ideal_filter(r.spec, kFitSupportRadius, kFitSupportRadius);
  r.residual_l1 = norm_diff(model, h, FitNorm::L1);
  r.residual_l2 = norm_diff(model, h, FitNorm::L2);
}

struct Min1D {
  double x = 0.0;
  double fx = 0.0;
};

/// Coarse scan followed by golden-section refinement of the bracketing
/// interval; robust to the kinks of l1 and absolute-difference objectives.
template <typename F>
Min1D scan_golden_min(F&& f, double lo, double hi, double tol, int scan_points) {
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double x = lo + (hi - lo) * i / (scan_points - 1);
    const double val = f(x);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  const double step = (hi - lo) / (scan_points - 1);
  double a = std::max(lo, lo + (best - 1) * step);
  double b = std::min(hi, lo + (best + 1) * step);

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
  Min1D out;
  out.x = 0.5 * (a + b);
  out.fx = f(out.x);
  if (best_val < out.fx) {
    out.x = lo + best * step;
    out.fx = best_val;
  }
  return out;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  double f = 0.0;
};

/// Deterministic Nelder-Mead on the clamped box, restarted from the best
/// seeds of a fixed lattice, then polished per axis by golden section.
/// The lattice spans the whole box so basins near the far edge are reachable.
template <typename F>
Point2 boxed_min_2d(F&& f, const Bounds1D& bounds, long& evals, long eval_cap) {
  const auto clamp = [&](double v) { return std::clamp(v, bounds.lo, bounds.hi); };
  const auto eval = [&](double x, double y) {
    ++evals;
    return f(clamp(x), clamp(y));
  };

  // 0.25-step lattice over the box; kinky l1 landscapes on noisy inputs
  // need seeds in every basin
  std::vector<Point2> lattice;
  for (double sx = bounds.lo; sx <= bounds.hi + 1e-12; sx += 0.25)
    for (double sy = bounds.lo; sy <= bounds.hi + 1e-12; sy += 0.25)
      lattice.push_back({sx, sy, eval(sx, sy)});
  std::sort(lattice.begin(), lattice.end(),
            [](const Point2& a, const Point2& b) { return a.f < b.f; });

  Point2 best = lattice[0];
  const int restarts = std::min<int>(5, static_cast<int>(lattice.size()));
  for (int r = 0; r < restarts && evals < eval_cap; ++r) {
    std::array<Point2, 3> s;
    s[0] = lattice[r];
    s[1] = {lattice[r].x + 0.15, lattice[r].y, 0.0};
    s[2] = {lattice[r].x, lattice[r].y + 0.15, 0.0};
    s[1].f = eval(s[1].x, s[1].y);
    s[2].f = eval(s[2].x, s[2].y);

    while (evals < eval_cap) {
      std::sort(s.begin(), s.end(), [](const Point2& a, const Point2& b) { return a.f < b.f; });
      const double diam = std::max(std::hypot(s[1].x - s[0].x, s[1].y - s[0].y),
                                   std::hypot(s[2].x - s[0].x, s[2].y - s[0].y));
      if (diam < bounds.tol) break;

      const double cx = 0.5 * (s[0].x + s[1].x);
      const double cy = 0.5 * (s[0].y + s[1].y);
      Point2 refl{cx + (cx - s[2].x), cy + (cy - s[2].y), 0.0};
      refl.f = eval(refl.x, refl.y);
      if (refl.f < s[0].f) {
        Point2 exp_{cx + 2.0 * (cx - s[2].x), cy + 2.0 * (cy - s[2].y), 0.0};
        exp_.f = eval(exp_.x, exp_.y);
        s[2] = exp_.f < refl.f ? exp_ : refl;
      } else if (refl.f < s[1].f) {
        s[2] = refl;
      } else {
        const Point2& base = refl.f < s[2].f ? refl : s[2];
        Point2 contr{cx + 0.5 * (base.x - cx), cy + 0.5 * (base.y - cy), 0.0};
        contr.f = eval(contr.x, contr.y);
        if (contr.f < std::min(refl.f, s[2].f)) {
          s[2] = contr;
        } else {
          for (int i = 1; i < 3; ++i) {
            s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
            s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
            s[i].f = eval(s[i].x, s[i].y);
          }
        }
      }
    }
    std::sort(s.begin(), s.end(), [](const Point2& a, const Point2& b) { return a.f < b.f; });
    Point2 cand{clamp(s[0].x), clamp(s[0].y), s[0].f};
    if (cand.f < best.f) best = cand;
  }

  // Per-axis golden-section polish around the incumbent.
  for (int round = 0; round < 2 && evals < eval_cap; ++round) {
    {
      auto fx = [&](double x) { return eval(x, best.y); };
      const Min1D m = scan_golden_min(fx, std::max(bounds.lo, best.x - 0.1),
                                      std::min(bounds.hi, best.x + 0.1), bounds.tol, 9);
      if (m.fx <= best.f) {
        best.x = m.x;
        best.f = m.fx;
      }
    }
    {
      auto fy = [&](double y) { return eval(best.x, y); };
      const Min1D m = scan_golden_min(fy, std::max(bounds.lo, best.y - 0.1),
                                      std::min(bounds.hi, best.y + 0.1), bounds.tol, 9);
      if (m.fx <= best.f) {
        best.y = m.x;
        best.f = m.fx;
      }
    }
  }
  return best;
}

}  // namespace

ScalePair method_a_from_variances(Family family, double vxx, double vyy) {
  require_variance_family(family, "method_a");
  if (vxx < 0.0 || vyy < 0.0)
    throw std::domain_error("method_a: variances must be non-negative");
  if (is_x_derivative(family))
    return {std::sqrt(2.0 * vxx / 3.0), std::sqrt(2.0 * vyy)};
  if (is_y_derivative(family))
    return {std::sqrt(2.0 * vxx), std::sqrt(2.0 * vyy / 3.0)};
  return {std::sqrt(2.0 * vxx), std::sqrt(2.0 * vyy)};
}

FitResult method_a(const NormalizedFilter& h_norm, Family family, double sigma0) {
  require_variance_family(family, "method_a");
  const FilterGrid h = crop_to(h_norm.grid, kFitSupportRadius, kFitSupportRadius);
  const SpreadMeasure sm = spread(h, WeightSpec::for_family(family, sigma0));

  FitResult r;
  r.method = FitMethod::A;
  r.spec = {family, method_a_from_variances(family, sm.cov.xx, sm.cov.yy), 0.0};
  r.objective_evals = 1;
  r.converged = true;
  fill_residuals(r, h);
  return r;
}

FitResult method_b(const NormalizedFilter& h_norm, Family family, double sigma0,
                   const Bounds1D& bounds) {
  require_variance_family(family, "method_b");
  validate_bounds(bounds);
  const FilterGrid h = crop_to(h_norm.grid, kFitSupportRadius, kFitSupportRadius);
  const WeightSpec w = WeightSpec::for_family(family, sigma0);
  const SpreadMeasure target = spread(h, w);

  long evals = 0;
  bool converged = true;
  const auto solve_axis = [&](bool x_axis) {
    const double goal = x_axis ? target.cov.xx : target.cov.yy;
    auto objective = [&](double sigma) {
      ++evals;
      const FilterGrid model =
          x_axis ? ideal_r3(family, sigma, sigma0) : ideal_r3(family, sigma0, sigma);
      const SpreadMeasure sm = spread(model, w);
      return std::abs((x_axis ? sm.cov.xx : sm.cov.yy) - goal);
    };
    const Min1D m = scan_golden_min(objective, bounds.lo, bounds.hi, bounds.tol, 61);
    const bool at_edge = m.x - bounds.lo < 2.0 * bounds.tol || bounds.hi - m.x < 2.0 * bounds.tol;
    if (at_edge && m.fx > 1e-9 * std::max(1.0, std::abs(goal))) converged = false;
    return m.x;
  };

  FitResult r;
  r.method = FitMethod::B;
  r.spec = {family, {solve_axis(true), solve_axis(false)}, 0.0};
  r.objective_evals = evals;
  r.converged = converged;
  fill_residuals(r, h);
  return r;
}

FitResult method_norm_fit(const NormalizedFilter& h_norm, Family family, FitNorm norm,
                          bool tie_scales, const Bounds1D& bounds) {
  if (family == Family::Sharpen)
    throw std::invalid_argument("method_norm_fit: use fit_sharpen7 for the sharpening family");
  validate_bounds(bounds);
  const FilterGrid h = crop_to(h_norm.grid, kFitSupportRadius, kFitSupportRadius);

  long evals = 0;
  FitResult r;
  if (tie_scales) {
    auto objective = [&](double sigma) {
      ++evals;
      return norm_diff(ideal_r3(family, sigma, sigma), h, norm);
    };
    const Min1D m = scan_golden_min(objective, bounds.lo, bounds.hi, bounds.tol, 61);
    r.method = norm == FitNorm::L1 ? FitMethod::C2 : FitMethod::D2;
    r.spec = {family, {m.x, m.x}, 0.0};
  } else {
    auto objective = [&](double sx, double sy) { return norm_diff(ideal_r3(family, sx, sy), h, norm); };
    const Point2 m = boxed_min_2d(objective, bounds, evals, kEvalCap);
    r.method = norm == FitNorm::L1 ? FitMethod::C1 : FitMethod::D1;
    r.spec = {family, {m.x, m.y}, 0.0};
  }
  r.objective_evals = evals;
  r.converged = evals < kEvalCap;
  fill_residuals(r, h);
  return r;
}

FitResult fit_sharpen7(const NormalizedFilter& h_norm, FitNorm norm, const Bounds1D& bounds) {
  if (h_norm.kind != NormKind::DcUnit)
    throw std::invalid_argument("fit_sharpen7: input must be DC-unit normalized");
  validate_bounds(bounds);
  const FilterGrid h = crop_to(h_norm.grid, kFitSupportRadius, kFitSupportRadius);

  long evals = 0;
  auto objective = [&](double sigma, double gamma) {
    return norm_diff(ideal_r3(Family::Sharpen, sigma, sigma, gamma), h, norm);
  };
  const Point2 m = boxed_min_2d(objective, bounds, evals, kEvalCap);

  FitResult r;
  r.method = norm == FitNorm::L1 ? FitMethod::Sharpen7L1 : FitMethod::Sharpen7L2;
  r.spec = {Family::Sharpen, {m.x, m.x}, m.y};
  r.objective_evals = evals;
  r.converged = evals < kEvalCap;
  fill_residuals(r, h);
  return r;
}

}  // namespace ssrf
