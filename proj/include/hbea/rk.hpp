#pragma once

// Implicit Runge–Kutta stepping for U' = AU + P_m B(P_m U) on a Fourier band.
//
// Stages solve W = (I − h a⊗A)⁻¹(𝟙U + h (a⊗I) B(W)); the update is
// Ψ = S(hA)U + h (bᵀ⊗I)(I − h a⊗A)⁻¹ B(W). A is block diagonal over modes,
// so the linear solves are exact per mode.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "hbea/models.hpp"
#include "hbea/spectral.hpp"

namespace hbea {

struct ButcherTableau {
  std::string id;
  int s = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  int order = 0;
  bool symplectic = false;
  bool a_stable = false;
  double norm_a = 0.0;  // max_i Σ_j |a_ij|
  double norm_b = 0.0;  // Σ |b_i|
  double eta = 0.0;
  double gamma = 0.0;

  static ButcherTableau make(std::string id, Eigen::MatrixXd a, Eigen::VectorXd b, int order,
                             bool symplectic, bool a_stable);

  /// max_ij |b_i a_ij + b_j a_ji − b_i b_j|
  double symplecticity_residual() const;
  double det_a() const { return a.determinant(); }
};

/// Gauss–Legendre collocation, s ∈ {1, 2, 3}, order 2s.
ButcherTableau gauss_legendre(int s);

/// "midpoint", "gauss1", "gauss2", "gauss3".
ButcherTableau tableau_by_id(const std::string& id);

/// S(z) = 1 + z bᵀ(I − za)⁻¹𝟙; throws PoleError when I − za is singular.
cd stability_function(const ButcherTableau& tab, cd z);

enum class StageScheme { fixed_point, newton_on_modes };

std::string to_string(StageScheme s);
StageScheme stage_scheme_from_string(const std::string& s);

struct StageSolveConfig {
  /// Stop when ‖W − Π(W)‖_Y ≤ tol·max(1, ‖U‖_Y).
  double tol = 1e-12;
  int max_iter = 200;
  StageScheme scheme = StageScheme::fixed_point;

  void validate() const;
  bool operator==(const StageSolveConfig&) const = default;
};

struct StageSolution {
  std::vector<FourierState> stages;
  int iterations = 0;
  double residual = 0.0;
};

/// Per-mode factorisations for fixed (model, tableau, h, m). Read-only after
/// construction and safe to share between threads.
class StepMap {
 public:
  StepMap(PdeModel model, ButcherTableau tab, double h, Cutoff m = Cutoff::full());

  const PdeModel& model() const { return model_; }
  const ButcherTableau& tableau() const { return tab_; }
  double h() const { return h_; }
  Cutoff cutoff() const { return m_; }

  StageSolution solve_stages(const FourierState& u, const StageSolveConfig& cfg = {}) const;
  FourierState step(const FourierState& u, const StageSolveConfig& cfg = {}) const;
  /// Update from already solved stages.
  FourierState update(const FourierState& u, const std::vector<FourierState>& stages) const;

  /// Π(W; U): one sweep of the stage fixed-point map.
  std::vector<FourierState> stage_map(const FourierState& u,
                                      const std::vector<FourierState>& w) const;

  /// (I − h a⊗A_k)⁻¹ for mode k, sc × sc.
  const Eigen::MatrixXcd& resolvent(int k) const { return resolvent_[k + model_.max_mode()]; }
  /// S(hA_k), c × c.
  const Eigen::MatrixXcd& stability(int k) const { return stability_[k + model_.max_mode()]; }

 private:
  /// out^i = Σ_l M_k[i,l] · (x^l)_k mode by mode.
  std::vector<FourierState> apply_resolvent(const std::vector<FourierState>& x) const;
  StageSolution solve_newton(const FourierState& u, const StageSolveConfig& cfg) const;

  PdeModel model_;
  ButcherTableau tab_;
  double h_;
  Cutoff m_;
  std::vector<Eigen::MatrixXcd> resolvent_;
  std::vector<Eigen::MatrixXcd> stability_;
};

StageSolution solve_stages(const PdeModel& model, const ButcherTableau& tab, const FourierState& u,
                           double h, Cutoff m, const StageSolveConfig& cfg = {});

FourierState step(const PdeModel& model, const ButcherTableau& tab, const FourierState& u,
                  double h, Cutoff m, const StageSolveConfig& cfg = {});

/// ‖DΨᵀ Ω DΨ − Ω‖_max with DΨ from fourth-order central differences in the
/// real coordinates of the band.
double symplecticity_residual(const PdeModel& model, const ButcherTableau& tab,
                              const FourierState& u, double h, Cutoff m);

/// ‖Dᵀ Ω D − Ω‖_max for a given Jacobian.
double symplecticity_residual(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& omega);

struct LinearOperatorBounds {
  double lambda;           // sup_k ‖(I − h a⊗A_k)⁻¹‖
  double one_plus_lambda;  // sup_k ‖h a⊗A_k (I − h a⊗A_k)⁻¹‖
  double c_s;              // sup_k ‖S(hA_k)‖
};

/// Block norms in the Y geometry, measured over the admitted modes.
LinearOperatorBounds linear_operator_bounds(const PdeModel& model, const ButcherTableau& tab,
                                            double h, Cutoff m);

}  // namespace hbea
