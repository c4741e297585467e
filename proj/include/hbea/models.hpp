#pragma once

// Semilinear Hamiltonian PDEs on the circle: U' = AU + B(U) = J∇H(U).
//
//   wave          u_tt = u_xx − V'(u),   U = (u, v), phase space H¹ × L²
//   nls           i u_t = −u_xx + λ|u|^{2σ}u
//   nonlocal_nls  i u_t = −u_xx + λ V'(N) u,  N = ∫|u|², V(r) = 1/r

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "hbea/grid_series.hpp"
#include "hbea/spectral.hpp"

namespace hbea {

enum class ModelKind { wave, nls, nonlocal_nls };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct WavePotential {
  enum class Kind { polynomial, sine_gordon };
  Kind kind = Kind::polynomial;
  /// V(u) = Σ_j c_j u^j, degree ≤ 8.
  std::vector<double> coefficients;
  /// V(u) = γ(1 − cos u).
  double gamma = 1.0;

  bool operator==(const WavePotential&) const = default;
};

struct ModelParams {
  ModelKind kind = ModelKind::nls;
  int max_mode = 16;
  int n_phys = 0;  // 0: chosen from the nonlinearity degree
  double lambda = 1.0;
  int sigma = 1;  // B = −iλ|u|^{2σ}u
  WavePotential potential;
  double rho_min = 1e-3;

  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

/// Immutable; cheap to copy (the grid is shared).
class PdeModel {
 public:
  explicit PdeModel(ModelParams params);

  ModelKind kind() const { return params_.kind; }
  std::string name() const { return to_string(params_.kind); }
  const ModelParams& params() const { return params_; }
  double q() const { return space_.q; }
  int components() const { return space_.components(); }
  const PhaseSpace& space() const { return space_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const FourierGrid& grid() const { return *grid_; }
  int max_mode() const { return grid_->max_mode(); }
  /// Largest |A|-eigenvalue on the band.
  double max_eigenvalue() const { return space_.eigenvalue(max_mode()); }

  FourierState zero_state() const { return FourierState(grid_, space_); }

  /// True when B is affine in U (the flow is linear).
  bool linear() const;

  /// c×c symbol of A on mode k.
  Eigen::MatrixXcd a_block(int k) const;

  FourierState apply_A(const FourierState& u) const;
  /// P_m B(P_m U).
  FourierState apply_B(const FourierState& u, Cutoff m = Cutoff::full()) const;
  FourierState apply_F(const FourierState& u, Cutoff m = Cutoff::full()) const;

  /// Series of P_m B(W(h)) for W(h) = Σ h^j w[j]; one state per order.
  std::vector<FourierState> apply_B_series(const std::vector<FourierState>& w, Cutoff m) const;

  double hamiltonian(const FourierState& u) const;
  FourierState apply_J_inv(const FourierState& u) const;

  /// Throws DomainError when u is outside the nonlinearity's domain.
  void check_domain(const FourierState& u) const;

  void require_compatible(const FourierState& u) const;

 private:
  double mass(const FourierState& u) const;

  ModelParams params_;
  PhaseSpace space_;
  GridPtr grid_;
};

/// max over random direction pairs of |⟨J⁻¹DB W₁, W₂⟩ − ⟨W₁, J⁻¹DB W₂⟩|,
/// relative to the magnitude of the pairings; DB by central differences.
double check_h2_selfadjoint(const PdeModel& model, const FourierState& u, Cutoff m, int n_dirs,
                            std::uint64_t seed = 1);

/// ‖J⁻¹(A+B)(U) − ∇H(U)‖_Y / (1 + ‖∇H(U)‖_Y), ∇H by central differences of H.
double grad_H_consistency(const PdeModel& model, const FourierState& u, Cutoff m);

}  // namespace hbea
