#pragma once

#include "ssrf/kernels.hpp"
#include "ssrf/normalize.hpp"

namespace ssrf {

enum class FitMethod { A, B, C1, C2, D1, D2, Sharpen7L1, Sharpen7L2 };
enum class FitNorm { L1, L2 };

/// Bounded 1-D search interval with termination tolerance.
struct Bounds1D {
  double lo = 0.0;
  double hi = 3.0;
  double tol = 1e-6;
};

/// Outcome of one model fit.  Residuals are measured against the normalized
/// input on the common 7x7 (radius-3) support, in both norms.
struct FitResult {
  FitMethod method = FitMethod::A;
  IdealizedSpec spec;
  double residual_l1 = 0.0;
  double residual_l2 = 0.0;
  long objective_evals = 0;
  bool converged = true;
};

/// Support radius on which all fits and fit residuals are evaluated,
/// matching the 7x7 learned filters.
inline constexpr int kFitSupportRadius = 3;

/// Direct transfer of scale values from the weighted variances, using the
/// closed forms for continuous Gaussian derivatives: sqrt(2v) on the
/// smoothing axis and sqrt(2v/3) on the differentiated axis.  The derivative
/// axis is x for families 2/4/5, y for families 1/3/6, none for family 8.
/// Families 7 and 9 are rejected.
ScalePair method_a_from_variances(Family family, double vxx, double vyy);

/// Method A applied to a normalized filter: reads the weighted variances of
/// |h| with the family-matched weighting shape at sigma0, then applies the
/// closed forms above.
FitResult method_a(const NormalizedFilter& h_norm, Family family, double sigma0);

/// Method B: per-axis matching of the weighted variances of the idealized
/// model to those of the normalized filter.  Separability makes the two 1-D
/// solves independent; each minimizes |V_axis(ideal(sigma)) - V_axis(h)| by
/// coarse scan plus golden section over the bounds.
FitResult method_b(const NormalizedFilter& h_norm, Family family, double sigma0,
                   const Bounds1D& bounds = {});

/// Norm-based fitting (methods C1/C2/D1/D2): minimize
/// ||ideal(sx, sy) - h_norm|| in the given norm over the bounds box, either
/// with independent axis scales (Nelder-Mead restarted from a deterministic
/// seed lattice) or tied scales (golden section on the diagonal).  Scales may
/// converge to 0 (the boundary is admitted).  The non-convergence flag is
/// raised after 2000 objective evaluations.
FitResult method_norm_fit(const NormalizedFilter& h_norm, Family family, FitNorm norm,
                          bool tie_scales, const Bounds1D& bounds = {});

/// Two-parameter fit of the sharpening model: joint minimization over
/// (sigma, gamma) of ||impulse - gamma * (Lap5 T)(sigma) - h_norm||.
/// Requires a DC-unit-normalized input.
FitResult fit_sharpen7(const NormalizedFilter& h_norm, FitNorm norm,
                       const Bounds1D& bounds = {});

}  // namespace ssrf
