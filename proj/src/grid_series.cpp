#include "hbea/grid_series.hpp"

#include <algorithm>
#include <cmath>

#include "hbea/errors.hpp"

namespace hbea {

GridSeries::GridSeries(int order, int points)
    : order_(order), points_(points),
      data_(static_cast<std::size_t>(order + 1) * points, cd(0.0)) {
  if (order < 0 || points < 0) throw InvalidArgument("GridSeries: negative size");
}

GridSeries GridSeries::constant(int order, std::span<const cd> values) {
  GridSeries s(order, static_cast<int>(values.size()));
  std::copy(values.begin(), values.end(), s.data_.begin());
  return s;
}

std::span<cd> GridSeries::coeff(int j) {
  return std::span<cd>(data_).subspan(static_cast<std::size_t>(j) * points_, points_);
}

std::span<const cd> GridSeries::coeff(int j) const {
  return std::span<const cd>(data_).subspan(static_cast<std::size_t>(j) * points_, points_);
}

namespace {
void require_points(const GridSeries& a, const GridSeries& b) {
  if (a.points() != b.points()) throw InvalidArgument("GridSeries: grid mismatch");
}
}  // namespace

GridSeries& GridSeries::operator+=(const GridSeries& o) {
  require_points(*this, o);
  const int n = std::min(order_, o.order_);
  for (int j = 0; j <= n; ++j)
    for (int x = 0; x < points_; ++x) at(j, x) += o.at(j, x);
  if (o.order_ < order_) {
    order_ = o.order_;
    data_.resize(static_cast<std::size_t>(order_ + 1) * points_);
  }
  return *this;
}

GridSeries& GridSeries::operator-=(const GridSeries& o) {
  require_points(*this, o);
  const int n = std::min(order_, o.order_);
  for (int j = 0; j <= n; ++j)
    for (int x = 0; x < points_; ++x) at(j, x) -= o.at(j, x);
  if (o.order_ < order_) {
    order_ = o.order_;
    data_.resize(static_cast<std::size_t>(order_ + 1) * points_);
  }
  return *this;
}

GridSeries& GridSeries::operator*=(cd s) {
  for (auto& v : data_) v *= s;
  return *this;
}

GridSeries& GridSeries::add_constant(cd c) {
  for (int x = 0; x < points_; ++x) at(0, x) += c;
  return *this;
}

GridSeries operator*(const GridSeries& a, const GridSeries& b) {
  require_points(a, b);
  const int n = std::min(a.order_, b.order_);
  GridSeries r(n, a.points_);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= j; ++i) {
      const cd* pa = a.data_.data() + static_cast<std::size_t>(i) * a.points_;
      const cd* pb = b.data_.data() + static_cast<std::size_t>(j - i) * b.points_;
      cd* pr = r.data_.data() + static_cast<std::size_t>(j) * r.points_;
      for (int x = 0; x < a.points_; ++x) pr[x] += pa[x] * pb[x];
    }
  }
  return r;
}

GridSeries GridSeries::conj() const {
  GridSeries r = *this;
  for (auto& v : r.data_) v = std::conj(v);
  return r;
}

GridSeries GridSeries::pow(int e) const {
  if (e < 0) return reciprocal().pow(-e);
  GridSeries result(order_, points_);
  result.add_constant(1.0);
  GridSeries base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

GridSeries GridSeries::reciprocal() const {
  GridSeries r(order_, points_);
  for (int x = 0; x < points_; ++x) {
    const cd a0 = at(0, x);
    if (a0 == cd(0.0)) throw DomainError("GridSeries::reciprocal: zero constant term");
    r.at(0, x) = 1.0 / a0;
    for (int j = 1; j <= order_; ++j) {
      cd acc = 0.0;
      for (int i = 1; i <= j; ++i) acc += at(i, x) * r.at(j - i, x);
      r.at(j, x) = -acc / a0;
    }
  }
  return r;
}

// s' = c·x', c' = −s·x' written coefficientwise.
void GridSeries::sincos(GridSeries& s, GridSeries& c) const {
  s = GridSeries(order_, points_);
  c = GridSeries(order_, points_);
  for (int x = 0; x < points_; ++x) {
    s.at(0, x) = std::sin(at(0, x));
    c.at(0, x) = std::cos(at(0, x));
    for (int n = 1; n <= order_; ++n) {
      cd sn = 0.0, cn = 0.0;
      for (int k = 1; k <= n; ++k) {
        const cd kx = static_cast<double>(k) * at(k, x);
        sn += kx * c.at(n - k, x);
        cn -= kx * s.at(n - k, x);
      }
      s.at(n, x) = sn / static_cast<double>(n);
      c.at(n, x) = cn / static_cast<double>(n);
    }
  }
}

GridSeries GridSeries::sin() const {
  GridSeries s, c;
  sincos(s, c);
  return s;
}

GridSeries GridSeries::cos() const {
  GridSeries s, c;
  sincos(s, c);
  return c;
}

GridSeries GridSeries::polynomial(std::span<const double> c, const GridSeries& x) {
  GridSeries r(x.order(), x.points());
  if (c.empty()) return r;
  r.add_constant(c.back());
  for (int j = static_cast<int>(c.size()) - 2; j >= 0; --j) {
    r = r * x;
    r.add_constant(c[j]);
  }
  return r;
}

double GridSeries::max_abs_diff(const GridSeries& o) const {
  require_points(*this, o);
  double m = 0.0;
  const int n = std::min(order_, o.order_);
  for (int j = 0; j <= n; ++j)
    for (int x = 0; x < points_; ++x) m = std::max(m, std::abs(at(j, x) - o.at(j, x)));
  return m;
}

}  // namespace hbea
