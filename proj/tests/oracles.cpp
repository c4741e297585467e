#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm(const cvec& v) {
  double s = 0;
  for (const cd& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cvec axpy(const cvec& y, cd a, const cvec& x) {
  cvec out = y;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] += a * x[i];
  return out;
}

// Gauss–Legendre nodes and weights on [0, 1] by Newton on P_n.
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1 - z);
    w[i] = 1.0 / ((1 - z * z) * dp * dp);
  }
}

}  // namespace

cvec gauss_map(const Field& f, const cvec& y, cd h, int s) {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  if (s == 1) {
    a = {{0.5}};
    b = {1.0};
  } else if (s == 2) {
    const double r = std::sqrt(3.0) / 6.0;
    a = {{0.25, 0.25 - r}, {0.25 + r, 0.25}};
    b = {0.5, 0.5};
  } else {
    throw std::invalid_argument("gauss_map: s must be 1 or 2");
  }
  std::vector<cvec> k(s, f(y));
  for (int it = 0; it < 1000; ++it) {
    std::vector<cvec> next(s);
    double change = 0, size = 0;
    for (int i = 0; i < s; ++i) {
      cvec arg = y;
      for (int j = 0; j < s; ++j) arg = axpy(arg, h * a[i][j], k[j]);
      next[i] = f(arg);
      change = std::max(change, norm(axpy(next[i], -1.0, k[i])));
      size = std::max(size, norm(next[i]));
    }
    k = std::move(next);
    if (change <= 1e-16 * (1 + size)) break;
  }
  cvec out = y;
  for (int i = 0; i < s; ++i) out = axpy(out, h * b[i], k[i]);
  return out;
}

cvec taylor(const std::function<cvec(cd)>& fn, int j, double r, int points) {
  cvec acc;
  for (int p = 0; p < points; ++p) {
    const double phi = 2 * kPi * p / points;
    const cvec v = fn(std::polar(r, phi));
    if (acc.empty()) acc.assign(v.size(), 0.0);
    const cd rot = std::polar(1.0, -phi * j);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] * rot;
  }
  const double scale = 1.0 / (points * std::pow(r, j));
  for (cd& x : acc) x *= scale;
  return acc;
}

cvec modified_coefficient(const Field& f, const cvec& y0, int j, int s) {
  if (j < 1 || j > 3) throw std::invalid_argument("modified_coefficient: 1 <= j <= 3");
  constexpr double r_h = 0.05;
  using Fn = std::function<cvec(const cvec&)>;

  Fn g2 = [&](const cvec& y) {
    return taylor([&](cd h) { return gauss_map(f, y, h, s); }, 2, r_h);
  };
  Fn g3 = [&](const cvec& y) {
    return taylor([&](cd h) { return gauss_map(f, y, h, s); }, 3, r_h);
  };
  // D_v G(y) = d/dε G(y + ε v(y)) at ε = 0.
  auto lie = [](Fn G, Fn v) -> Fn {
    return [G, v](const cvec& y) {
      const cvec d = v(y);
      const double nd = norm(d);
      if (nd == 0.0) return cvec(y.size(), 0.0);
      const double r = 0.1 * (1 + norm(y)) / nd;
      return taylor([&](cd e) { return G(axpy(y, e, d)); }, 1, r);
    };
  };
  Fn f1 = f;
  if (j == 1) return f1(y0);
  Fn f2 = [&](const cvec& y) {
    const cvec a = g2(y);
    const cvec b = lie(f1, f1)(y);
    return axpy(a, -0.5, b);
  };
  if (j == 2) return f2(y0);
  cvec out = g3(y0);
  out = axpy(out, -0.5, lie(f2, f1)(y0));
  out = axpy(out, -0.5, lie(f1, f2)(y0));
  out = axpy(out, -1.0 / 6.0, lie(lie(f1, f1), f1)(y0));
  return out;
}

double line_integral(const std::function<cvec(const cvec&)>& g, const cvec& y,
                     const std::function<double(const cvec&, const cvec&)>& pairing,
                     const std::function<cvec(const cvec&)>& j_inv) {
  std::vector<double> t, w;
  legendre_rule(20, t, w);
  double acc = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cvec p = y;
    for (cd& v : p) v *= t[i];
    acc += w[i] * pairing(y, j_inv(g(p)));
  }
  return acc;
}

Field nls_one_mode(double lambda) {
  const double kappa = lambda / (2 * kPi);
  return [kappa](const cvec& x) {
    const cd om = 1.0 + kappa * (x[0] * x[0] + x[1] * x[1]);
    return cvec{om * x[1], -om * x[0]};
  };
}

Field wave_one_mode(double c2, double c4) {
  return [c2, c4](const cvec& x) {
    const cd rho = x[0] * x[0] + x[1] * x[1];
    const cd g = 1.0 + 2.0 * c2 + 12.0 * c4 * rho / (2 * kPi);
    return cvec{x[2], x[3], -g * x[0], -g * x[1]};
  };
}

cd nls_midpoint_f3(cd c, double lambda) {
  const double kappa = lambda / (2 * kPi);
  const double rho = std::norm(c);
  const double om = 1 + kappa * rho;
  const double omega2 = -om * om * (1 + 4 * kappa * rho) / 12.0;
  return cd(0, -omega2) * c;
}

double nls_midpoint_H3(cd c, double lambda) {
  const double kappa = lambda / (2 * kPi);
  const double rho = std::norm(c);
  if (std::abs(kappa) < 1e-14) return -rho / 24.0;
  const double T = 1 + kappa * rho;
  return -(std::pow(T, 4) - std::pow(T, 3)) / (24.0 * kappa);
}

}  // namespace oracle
