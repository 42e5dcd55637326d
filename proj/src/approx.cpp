#include "ssrf/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssrf {

AffineFit affine_fit(const FilterGrid& f, const FilterGrid& f_prime) {
  if (!f.same_support(f_prime))
    throw std::invalid_argument("affine_fit: supports must match");

  const std::size_t n = f.data().size();
  double mean_f = 0.0, mean_p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_f += f.data()[i];
    mean_p += f_prime.data()[i];
  }
  mean_f /= static_cast<double>(n);
  mean_p /= static_cast<double>(n);

  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = f_prime.data()[i] - mean_p;
    cov += (f.data()[i] - mean_f) * dp;
    var += dp * dp;
  }
  cov /= static_cast<double>(n);
  var /= static_cast<double>(n);
  if (var < 1e-15)
    throw std::runtime_error("affine_fit: reference filter is (near-)constant");

  AffineFit out;
  out.a = cov / var;
  out.b = mean_f - out.a * mean_p;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = f.data()[i] - (out.a * f_prime.data()[i] + out.b);
    acc += d * d;
  }
  out.residual = std::sqrt(acc);
  return out;
}

AffineMatch classify(const FilterGrid& f, const std::vector<FilterGrid>& reference) {
  if (reference.empty()) throw std::invalid_argument("classify: empty reference set");

  struct Candidate {
    int index;
    double residual;
    double a;
    double b;
    bool ok;
  };
  std::vector<Candidate> cands;
  cands.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    Candidate c{static_cast<int>(i) + 1, std::numeric_limits<double>::infinity(), 0.0, 0.0, false};
    try {
      const AffineFit fit = affine_fit(f, reference[i]);
      c.residual = fit.residual;
      c.a = fit.a;
      c.b = fit.b;
      c.ok = true;
    } catch (const std::exception&) {
      // failed candidates rank last
    }
    cands.push_back(c);
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return a.index < b.index;
  });
  if (!cands.front().ok)
    throw std::runtime_error("classify: every reference candidate failed to fit");

  AffineMatch out;
  out.family_index = cands.front().index;
  out.a = cands.front().a;
  out.b = cands.front().b;
  out.residual_l2 = cands.front().residual;
  for (const Candidate& c : cands) out.rank.emplace_back(c.index, c.residual);
  return out;
}

}  // namespace ssrf
