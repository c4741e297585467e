#pragma once

// Real coordinates on the admitted modes of a band.
//
// Complex fields get (Re û_k, Im û_k) per mode. Real fields get û_0 and
// (√2 Re û_k, √2 Im û_k) for k > 0, which covers the pair ±k. In both cases
// the Y inner product becomes Σ_i w_i x_i y_i.

#include <Eigen/Dense>

#include "hbea/models.hpp"
#include "hbea/spectral.hpp"

namespace hbea {

class RealCoordinates {
 public:
  RealCoordinates(GridPtr grid, PhaseSpace space, Cutoff m = Cutoff::full());
  explicit RealCoordinates(const PdeModel& model, Cutoff m = Cutoff::full())
      : RealCoordinates(model.grid_ptr(), model.space(), m) {}

  int dim() const { return static_cast<int>(slots_.size()); }

  Eigen::VectorXd to_real(const FourierState& u) const;
  FourierState from_real(const Eigen::VectorXd& x) const;
  FourierState basis(int i) const;

  /// Y weights of the coordinates.
  const Eigen::VectorXd& weights() const { return weights_; }
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  /// Ω_ij = ⟨J⁻¹e_i, e_j⟩_Y.
  Eigen::MatrixXd omega(const PdeModel& model) const;

  /// Gradient of a scalar function by fourth-order central differences, as a
  /// FourierState in the Y geometry.
  template <class Fn>
  FourierState gradient(Fn&& fn, const FourierState& u, double eps) const {
    const Eigen::VectorXd x0 = to_real(u);
    Eigen::VectorXd g(dim());
    for (int i = 0; i < dim(); ++i) {
      auto at = [&](double s) {
        Eigen::VectorXd x = x0;
        x[i] += s;
        return fn(from_real(x));
      };
      const double d = (-at(2 * eps) + 8 * at(eps) - 8 * at(-eps) + at(-2 * eps)) / (12 * eps);
      g[i] = d / weights_[i];
    }
    return from_real(g);
  }

 private:
  struct Slot {
    int comp;
    int k;
    bool imag;
  };
  GridPtr grid_;
  PhaseSpace space_;
  std::vector<Slot> slots_;
  Eigen::VectorXd weights_;
};

}  // namespace hbea
