#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ssrf/kernels.hpp"
#include "ssrf/measures.hpp"

using namespace ssrf;

namespace {

std::vector<double> conv1d(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

FilterGrid random_grid(int radius, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FilterGrid g(radius, radius);
  for (double& v : g.data()) v = dist(rng);
  return g;
}

}  // namespace

TEST_CASE("bessel_i matches the frozen series oracle") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(3, 0.0) == 0.0);
  // 40-digit power-series oracle values
  CHECK(bessel_i(1, 1.0) == doctest::Approx(0.5651591039924850272).epsilon(1e-14));
  CHECK(bessel_i(0, 1.0) == doctest::Approx(1.2660658777520083356).epsilon(1e-14));
}

TEST_CASE("bessel_i agrees with the standard library over the operating range") {
  for (int n : {0, 1, 2, 5, 8, 13, 21, 32}) {
    for (double x : {0.01, 0.09, 0.36, 1.0, 2.25, 4.0, 9.0, 16.0, 25.0}) {
      const double ours = bessel_i(n, x);
      const double ref = std::cyl_bessel_i(static_cast<double>(n), x);
      if (ref > 0.0) CHECK(std::abs(ours - ref) / ref <= 1e-12);
    }
  }
}

TEST_CASE("bessel_i rejects negative arguments") {
  CHECK_THROWS_AS(bessel_i(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(0, -0.5), std::domain_error);
}

TEST_CASE("disc_gauss_1d delta limit and center value") {
  const auto delta = disc_gauss_1d(0.0, 3);
  const std::vector<double> expected{0, 0, 0, 1, 0, 0, 0};
  CHECK(delta == expected);

  const auto k = disc_gauss_1d(1.0, 8);
  CHECK(k[8] == doctest::Approx(0.4657596075936404365).epsilon(1e-14));
  CHECK(k[7] == k[9]);  // symmetry

  CHECK_THROWS_AS(disc_gauss_1d(-0.1, 3), std::domain_error);
  CHECK_THROWS_AS(disc_gauss_1d(1.0, -1), std::domain_error);
}

TEST_CASE("disc_gauss_1d total mass reaches 1 on adequate support") {
  // sigma = 0.6 at radius 8: the analytic total sum_n e^{-s} I_n(s) = 1
  double mass = 0.0;
  for (double v : disc_gauss_1d(0.6, 8)) mass += v;
  CHECK(std::abs(mass - 1.0) <= 1e-12);

  for (double sigma : {0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5}) {
    const int radius = static_cast<int>(std::ceil(6.0 * sigma)) + 6;
    double m = 0.0;
    for (double v : disc_gauss_1d(sigma, radius)) m += v;
    CHECK(m <= 1.0 + 1e-15);
    CHECK(m >= 1.0 - 1e-12);
  }
}

TEST_CASE("disc_gauss_1d semigroup property") {
  const double s1 = 0.8, s2 = 0.6;
  const double s3 = std::sqrt(s1 * s1 + s2 * s2);
  const int radius = 10;
  const auto a = disc_gauss_1d(s1, radius);
  const auto b = disc_gauss_1d(s2, radius);
  const auto direct = disc_gauss_1d(s3, 2 * radius);
  const auto composed = conv1d(a, b);
  REQUIRE(composed.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(std::abs(composed[i] - direct[i]) <= 1e-10);
}

TEST_CASE("disc_gauss_2d impulse limit, spread law and separability symmetry") {
  const FilterGrid imp = disc_gauss_2d({0.0, 0.0}, 3, 3);
  for (int y = -3; y <= 3; ++y)
    for (int x = -3; x <= 3; ++x) CHECK(imp.at(x, y) == (x == 0 && y == 0 ? 1.0 : 0.0));

  const SpreadMeasure sm = spread(disc_gauss_2d({1.0, 1.0}, 12, 12));
  CHECK(std::abs(sm.cov.xx - 1.0) <= 1e-10);
  CHECK(std::abs(sm.cov.yy - 1.0) <= 1e-10);
  CHECK(std::abs(sm.cov.xy) <= 1e-10);

  const SpreadMeasure aniso = spread(disc_gauss_2d({0.5, 0.8}, 11, 11));
  CHECK(std::abs(aniso.cov.xx - 0.25) <= 1e-10);
  CHECK(std::abs(aniso.cov.yy - 0.64) <= 1e-10);

  const FilterGrid g1 = disc_gauss_2d({0.6, 0.9}, 5, 5);
  const FilterGrid g2 = disc_gauss_2d({0.9, 0.6}, 5, 5);
  for (int y = -5; y <= 5; ++y)
    for (int x = -5; x <= 5; ++x) CHECK(g1.at(x, y) == g2.at(y, x));
}

TEST_CASE("molecules match the stated stencils exactly") {
  const FilterGrid dx = diff_molecule(DiffOp::Dx);
  CHECK(dx.at(-1, 0) == -0.5);
  CHECK(dx.at(0, 0) == 0.0);
  CHECK(dx.at(1, 0) == 0.5);
  CHECK(dx.at(0, 1) == 0.0);
  CHECK(dx.at(0, -1) == 0.0);

  const FilterGrid dxx = diff_molecule(DiffOp::Dxx);
  CHECK(dxx.at(-1, 0) == 1.0);
  CHECK(dxx.at(0, 0) == -2.0);
  CHECK(dxx.at(1, 0) == 1.0);

  const FilterGrid dxy = diff_molecule(DiffOp::Dxy);
  CHECK(dxy.at(1, 1) == 0.25);
  CHECK(dxy.at(-1, 1) == -0.25);
  CHECK(dxy.at(1, -1) == -0.25);
  CHECK(dxy.at(-1, -1) == 0.25);

  // operator algebra: dx = (dx+ + dx-)/2 and dxx = dx+ - dx-
  const FilterGrid dxp = diff_molecule(DiffOp::DxPlus);
  const FilterGrid dxm = diff_molecule(DiffOp::DxMinus);
  for (int y = -1; y <= 1; ++y)
    for (int x = -1; x <= 1; ++x) {
      CHECK(0.5 * (dxp.at(x, y) + dxm.at(x, y)) == dx.at(x, y));
      CHECK(dxp.at(x, y) - dxm.at(x, y) == dxx.at(x, y));
    }

  const FilterGrid dyp = diff_molecule(DiffOp::DyPlus);
  const FilterGrid dym = diff_molecule(DiffOp::DyMinus);
  const FilterGrid dy = diff_molecule(DiffOp::Dy);
  const FilterGrid dyy = diff_molecule(DiffOp::Dyy);
  for (int y = -1; y <= 1; ++y)
    for (int x = -1; x <= 1; ++x) {
      CHECK(0.5 * (dyp.at(x, y) + dym.at(x, y)) == dy.at(x, y));
      CHECK(dyp.at(x, y) - dym.at(x, y) == dyy.at(x, y));
    }

  const FilterGrid lap = diff_molecule(DiffOp::Lap5);
  for (int y = -1; y <= 1; ++y)
    for (int x = -1; x <= 1; ++x) CHECK(lap.at(x, y) == dxx.at(x, y) + dyy.at(x, y));
}

TEST_CASE("apply_op is a full convolution") {
  // impulse is the identity element
  const FilterGrid g = random_grid(2, 42);
  const FilterGrid conv = apply_op(FilterGrid::impulse(1, 1), g);
  CHECK(conv.radius_x() == 3);
  for (int y = -2; y <= 2; ++y)
    for (int x = -2; x <= 2; ++x) CHECK(conv.at(x, y) == g.at(x, y));

  // hand-convolved oracle: dx * dx is the /4-scaled second difference on a
  // doubled span
  const FilterGrid d2 = apply_op(diff_molecule(DiffOp::Dx), diff_molecule(DiffOp::Dx));
  CHECK(d2.radius_x() == 2);
  CHECK(d2.at(-2, 0) == 0.25);
  CHECK(d2.at(-1, 0) == 0.0);
  CHECK(d2.at(0, 0) == -0.5);
  CHECK(d2.at(1, 0) == 0.0);
  CHECK(d2.at(2, 0) == 0.25);
  for (int x = -2; x <= 2; ++x) {
    CHECK(d2.at(x, 1) == 0.0);
    CHECK(d2.at(x, -1) == 0.0);
  }
}

TEST_CASE("non-centered differences compose to the centered ones on any grid") {
  const FilterGrid g = random_grid(3, 7);
  const FilterGrid sum =
      apply_op(diff_molecule(DiffOp::DxPlus), g) + apply_op(diff_molecule(DiffOp::DxMinus), g);
  const FilterGrid twice = 2.0 * apply_op(diff_molecule(DiffOp::Dx), g);
  for (std::size_t i = 0; i < sum.data().size(); ++i)
    CHECK(sum.data()[i] == doctest::Approx(twice.data()[i]).epsilon(1e-15));

  const FilterGrid diff =
      apply_op(diff_molecule(DiffOp::DxPlus), g) - apply_op(diff_molecule(DiffOp::DxMinus), g);
  const FilterGrid dxx = apply_op(diff_molecule(DiffOp::Dxx), g);
  for (std::size_t i = 0; i < diff.data().size(); ++i)
    CHECK(diff.data()[i] == doctest::Approx(dxx.data()[i]).epsilon(1e-15));
}

TEST_CASE("ideal_filter limits and validation") {
  // gamma = 0 sharpening is the unit impulse
  const FilterGrid sharp0 = ideal_filter({Family::Sharpen, {0.7, 0.7}, 0.0}, 3, 3);
  for (int y = -3; y <= 3; ++y)
    for (int x = -3; x <= 3; ++x) CHECK(sharp0.at(x, y) == (x == 0 && y == 0 ? 1.0 : 0.0));

  // delta-limit of the smoothing kernel leaves the bare molecule
  const FilterGrid dyp = ideal_filter({Family::DyPlus, {0.0, 0.0}, 0.0}, 3, 3);
  const FilterGrid mol = diff_molecule(DiffOp::DyPlus);
  for (int y = -3; y <= 3; ++y)
    for (int x = -3; x <= 3; ++x) {
      const double expected = (std::abs(x) <= 1 && std::abs(y) <= 1) ? mol.at(x, y) : 0.0;
      CHECK(dyp.at(x, y) == expected);
    }

  CHECK_THROWS_AS(ideal_filter({Family::Sharpen, {0.6, 0.7}, 0.5}, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(ideal_filter({Family::Smooth, {0.6, 0.6}, 0.5}, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(ideal_filter({Family::Smooth, {-0.6, 0.6}, 0.0}, 3, 3), std::domain_error);
  CHECK_THROWS_AS(ideal_filter({Family::Sharpen, {0.6, 0.6}, -0.1}, 3, 3), std::domain_error);
}

TEST_CASE("ideal smoothing at published radius-3 scales has finite near-isotropic spread") {
  const FilterGrid g = ideal_filter({Family::Smooth, {0.552, 0.545}, 0.0}, 3, 3);
  const SpreadMeasure sm = spread(g);
  CHECK(sm.cov.xx > 0.0);
  CHECK(sm.cov.yy > 0.0);
  CHECK(std::abs(sm.cov.xx - sm.cov.yy) < 0.02);
}

TEST_CASE("centered families are DC-free on any symmetric crop") {
  for (Family f : {Family::DxCentered, Family::DyCentered, Family::DxyMixed}) {
    const FilterGrid g = ideal_filter({f, {0.7, 0.9}, 0.0}, 4, 4);
    double sum = 0.0;
    for (double v : g.data()) sum += v;
    CHECK(std::abs(sum) <= 1e-14);
  }
}

TEST_CASE("non-centered families are DC-free on adequate support") {
  for (Family f : {Family::DyPlus, Family::DxMinus, Family::DyMinus, Family::DxPlus}) {
    const FilterGrid g = ideal_filter({f, {0.6, 0.6}, 0.0}, 10, 10);
    double sum = 0.0;
    for (double v : g.data()) sum += v;
    CHECK(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("smoothing-like families respond 1 to the constant on adequate support") {
  const FilterGrid smooth = ideal_filter({Family::Smooth, {0.8, 0.8}, 0.0}, 12, 12);
  double mass = 0.0;
  for (double v : smooth.data()) mass += v;
  CHECK(std::abs(mass - 1.0) <= 1e-12);

  const FilterGrid sharp = ideal_filter({Family::Sharpen, {0.66, 0.66}, 0.52}, 12, 12);
  mass = 0.0;
  for (double v : sharp.data()) mass += v;
  CHECK(std::abs(mass - 1.0) <= 1e-12);
}
