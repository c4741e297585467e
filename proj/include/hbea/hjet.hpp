#pragma once

// Power series in the step size h with FourierState coefficients, and the
// order-by-order expansion of the Runge–Kutta map Ψ^h(U) = Σ h^j g^j(U).

#include <functional>
#include <vector>

#include "hbea/models.hpp"
#include "hbea/rk.hpp"
#include "hbea/spectral.hpp"

namespace hbea {

inline constexpr int kDefaultOrderCap = 12;

struct HJet {
  std::vector<FourierState> coeffs;
  Cutoff band;

  HJet() = default;
  HJet(std::vector<FourierState> c, Cutoff m) : coeffs(std::move(c)), band(m) {}

  static HJet constant(const FourierState& u, int order, Cutoff m);

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  const FourierState& operator[](int j) const { return coeffs[j]; }
  FourierState& operator[](int j) { return coeffs[j]; }

  /// Σ_j h^j coeffs[j].
  FourierState evaluate(double h) const;

  HJet& operator+=(const HJet& o);
  HJet& operator*=(double s);
};

/// Jet of P_m B(u(h)) to the order of u, band taken from the jet.
HJet jet_lift_nonlinearity(const PdeModel& model, const HJet& u);

/// Jet of Ψ_m^h(U) up to h^order.
HJet expand_step_map(const PdeModel& model, const ButcherTableau& tab, const FourierState& u,
                     Cutoff m, int order, int order_cap = kDefaultOrderCap);

/// Jet of Ψ_m^h(Z(h)) for a jet-valued input, up to the order of Z.
HJet expand_step_map(const PdeModel& model, const ButcherTableau& tab, const HJet& z, Cutoff m,
                     int order_cap = kDefaultOrderCap);

using VectorFieldEval = std::function<FourierState(const FourierState&)>;

/// DF(U)·d by fourth-order central differences, ε = ε₀(1+‖U‖)/(1+‖d‖).
FourierState directional_derivative(const VectorFieldEval& f, const FourierState& u,
                                    const FourierState& d, double eps0 = 1e-5);

/// DF(U)·G(U).
FourierState lie_derivative(const VectorFieldEval& f, const VectorFieldEval& g,
                            const FourierState& u, double eps0 = 1e-5);

}  // namespace hbea
