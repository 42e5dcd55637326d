#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ssrf {

/// Odd-sized 2-D coefficient grid with centered integer coordinates.
///
/// Coordinate convention: x = col - radius_x (increasing rightward),
/// y = radius_y - row (increasing upward).  Row 0 is therefore the top
/// of the grid, and the center coefficient sits at (x, y) = (0, 0).
class FilterGrid {
 public:
  FilterGrid() = default;

  FilterGrid(int radius_x, int radius_y)
      : rx_(radius_x),
        ry_(radius_y),
        values_(static_cast<std::size_t>(2 * radius_x + 1) *
                static_cast<std::size_t>(2 * radius_y + 1), 0.0) {
    assert(radius_x >= 0 && radius_y >= 0);
  }

  int radius_x() const { return rx_; }
  int radius_y() const { return ry_; }
  int cols() const { return 2 * rx_ + 1; }
  int rows() const { return 2 * ry_ + 1; }

  double& at(int x, int y) { return values_[index(x, y)]; }
  double at(int x, int y) const { return values_[index(x, y)]; }

  /// Row-major storage, row 0 on top (y = +radius_y).
  const std::vector<double>& data() const { return values_; }
  std::vector<double>& data() { return values_; }

  bool same_support(const FilterGrid& other) const {
    return rx_ == other.rx_ && ry_ == other.ry_;
  }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  static FilterGrid impulse(int radius_x, int radius_y) {
    FilterGrid g(radius_x, radius_y);
    g.at(0, 0) = 1.0;
    return g;
  }

 private:
  std::size_t index(int x, int y) const {
    assert(x >= -rx_ && x <= rx_ && y >= -ry_ && y <= ry_);
    return static_cast<std::size_t>(ry_ - y) * static_cast<std::size_t>(cols()) +
           static_cast<std::size_t>(x + rx_);
  }

  int rx_ = 0;
  int ry_ = 0;
  std::vector<double> values_;
};

inline FilterGrid operator*(double c, const FilterGrid& g) {
  FilterGrid out = g;
  for (double& v : out.data()) v *= c;
  return out;
}

inline FilterGrid operator+(const FilterGrid& a, const FilterGrid& b) {
  assert(a.same_support(b));
  FilterGrid out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

inline FilterGrid operator-(const FilterGrid& a, const FilterGrid& b) {
  assert(a.same_support(b));
  FilterGrid out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

}  // namespace ssrf
