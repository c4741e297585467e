#include "hbea/hjet.hpp"

#include "hbea/errors.hpp"

namespace hbea {

HJet HJet::constant(const FourierState& u, int order, Cutoff m) {
  std::vector<FourierState> c(order + 1, u.zeros_like());
  c[0] = project(u, m);
  return HJet(std::move(c), m);
}

FourierState HJet::evaluate(double h) const {
  FourierState acc = coeffs.back();
  for (int j = order() - 1; j >= 0; --j) {
    acc *= h;
    acc += coeffs[j];
  }
  return acc;
}

HJet& HJet::operator+=(const HJet& o) {
  if (o.order() != order()) throw InvalidArgument("HJet: order mismatch");
  for (int j = 0; j <= order(); ++j) coeffs[j] += o.coeffs[j];
  return *this;
}

HJet& HJet::operator*=(double s) {
  for (auto& c : coeffs) c *= s;
  return *this;
}

HJet jet_lift_nonlinearity(const PdeModel& model, const HJet& u) {
  return HJet(model.apply_B_series(u.coeffs, u.band), u.band);
}

HJet expand_step_map(const PdeModel& model, const ButcherTableau& tab, const FourierState& u,
                     Cutoff m, int order, int order_cap) {
  if (order < 0) throw InvalidArgument("expand_step_map: negative order");
  return expand_step_map(model, tab, HJet::constant(u, order, m), m, order_cap);
}

// W^i_j = Z_j + Σ_l a_il (A W^l + B(W^l))_{j−1}; Ψ_j = Z_j + Σ_i b_i (A W^i + B(W^i))_{j−1}.
HJet expand_step_map(const PdeModel& model, const ButcherTableau& tab, const HJet& z_in, Cutoff m,
                     int order_cap) {
  const int n = z_in.order();
  if (n > order_cap) throw InvalidArgument("expand_step_map: order cap exceeded");
  const int s = tab.s;
  std::vector<FourierState> z;
  z.reserve(n + 1);
  for (const auto& c : z_in.coeffs) z.push_back(project(c, m));

  std::vector<std::vector<FourierState>> w(s);
  for (int i = 0; i < s; ++i) w[i].push_back(z[0]);
  std::vector<FourierState> psi{z[0]};

  for (int j = 1; j <= n; ++j) {
    // Stage fields at order j−1; stage coefficients up to j−1 are known.
    std::vector<FourierState> f(s);
    for (int l = 0; l < s; ++l) {
      f[l] = model.apply_A(w[l][j - 1]);
      f[l] += model.apply_B_series(w[l], m).back();
    }
    for (int i = 0; i < s; ++i) {
      FourierState c = z[j];
      for (int l = 0; l < s; ++l)
        if (tab.a(i, l) != 0.0) c.axpy(tab.a(i, l), f[l]);
      w[i].push_back(std::move(c));
    }
    FourierState p = z[j];
    for (int i = 0; i < s; ++i) p.axpy(tab.b[i], f[i]);
    psi.push_back(std::move(p));
  }
  return HJet(std::move(psi), m);
}

FourierState directional_derivative(const VectorFieldEval& f, const FourierState& u,
                                    const FourierState& d, double eps0) {
  const double nd = y_norm(d);
  if (nd == 0.0) return f(u).zeros_like();
  const double eps = eps0 * (1.0 + y_norm(u)) / (1.0 + nd);
  auto at = [&](double s) {
    FourierState x = u;
    x.axpy(s, d);
    return f(x);
  };
  FourierState r = at(-2 * eps);
  r.axpy(-8.0, at(-eps));
  r.axpy(8.0, at(eps));
  r -= at(2 * eps);
  r *= 1.0 / (12.0 * eps);
  return r;
}

FourierState lie_derivative(const VectorFieldEval& f, const VectorFieldEval& g,
                            const FourierState& u, double eps0) {
  return directional_derivative(f, u, g(u), eps0);
}

}  // namespace hbea
