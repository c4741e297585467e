#pragma once

// Truncated power series in h evaluated pointwise on a physical grid.
// Coefficient j at grid point x is at(j, x); every product truncates at the
// smaller of the two orders.

#include <span>
#include <vector>

#include "hbea/spectral.hpp"

namespace hbea {

class GridSeries {
 public:
  GridSeries() = default;
  GridSeries(int order, int points);

  static GridSeries constant(int order, std::span<const cd> values);

  int order() const { return order_; }
  int points() const { return points_; }

  cd& at(int j, int x) { return data_[static_cast<std::size_t>(j) * points_ + x]; }
  cd at(int j, int x) const { return data_[static_cast<std::size_t>(j) * points_ + x]; }
  std::span<cd> coeff(int j);
  std::span<const cd> coeff(int j) const;

  GridSeries& operator+=(const GridSeries& o);
  GridSeries& operator-=(const GridSeries& o);
  GridSeries& operator*=(cd s);
  GridSeries& add_constant(cd c);

  friend GridSeries operator+(GridSeries a, const GridSeries& b) { return a += b; }
  friend GridSeries operator-(GridSeries a, const GridSeries& b) { return a -= b; }
  friend GridSeries operator*(cd s, GridSeries a) { return a *= s; }
  friend GridSeries operator*(const GridSeries& a, const GridSeries& b);

  GridSeries conj() const;
  GridSeries pow(int e) const;
  /// 1/x; throws DomainError when the constant term vanishes somewhere.
  GridSeries reciprocal() const;
  GridSeries sin() const;
  GridSeries cos() const;

  /// Σ_j c_j x^j.
  static GridSeries polynomial(std::span<const double> c, const GridSeries& x);

  double max_abs_diff(const GridSeries& o) const;

 private:
  void sincos(GridSeries& s, GridSeries& c) const;

  int order_ = 0;
  int points_ = 0;
  std::vector<cd> data_;
};

}  // namespace hbea
