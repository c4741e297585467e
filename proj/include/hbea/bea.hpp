#pragma once

// Backward error analysis for the truncated system: the modified field
// f̃(U;h) = f(U) + Σ_{j=p}^{n−1} h^j f^{j+1}(U), its flow, and the modified
// Hamiltonian H̃ = H + Σ_{j=p}^{n−1} h^j H^{j+1}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hbea/hjet.hpp"
#include "hbea/models.hpp"
#include "hbea/reference_flow.hpp"
#include "hbea/rk.hpp"
#include "hbea/spectral.hpp"

namespace hbea {

// ---------------------------------------------------------------------------
// Truncation policy

enum class PolicyMode { explicit_nm, paper_coupled };

std::string to_string(PolicyMode m);
PolicyMode policy_mode_from_string(const std::string& s);

struct TruncationPolicy {
  PolicyMode mode = PolicyMode::explicit_nm;
  int n = 1;
  Cutoff m;
  double tau = 1.0;
  double q = 0.0;  // 0: the model's q
  double delta = 0.25;
  double c_F = 0.0;  // 0: measured at the sample state
  double chi = 0.0;  // > 0 overrides δ/(2eηc_F)
  int n_max = 6;

  static TruncationPolicy explicit_policy(int n, Cutoff m = Cutoff::full()) {
    TruncationPolicy p;
    p.n = n;
    p.m = m;
    return p;
  }
};

struct ResolvedPolicy {
  int n = 1;
  Cutoff m;
  double chi = 0.0;
  bool n_clamped = false;
  bool m_clamped = false;
};

/// c_F = ‖U‖_{Y₁} + ‖B(U)‖_Y at the sample state.
double measure_c_F(const PdeModel& model, const FourierState& u);

/// (n, m) for step size h. The coupled mode needs either policy.chi, policy.c_F
/// or a sample state to measure c_F.
ResolvedPolicy resolve_policy(const TruncationPolicy& policy, double h, const ButcherTableau& tab,
                              const PdeModel& model, const FourierState* sample = nullptr);

// ---------------------------------------------------------------------------
// Modified field

enum class FieldEngine {
  /// Exact: derivative at i = 0 of the jets of Ψ^i, i = 0…j.
  iterate_log,
  /// The coefficient recursion with nested finite-difference Lie derivatives.
  lie_recursion,
};

std::string to_string(FieldEngine e);
FieldEngine field_engine_from_string(const std::string& s);

struct ModifiedFieldOptions {
  FieldEngine engine = FieldEngine::iterate_log;
  double eps0 = 1e-5;
  /// Skip f^k, 2 ≤ k ≤ p, which vanish for an order-p method.
  bool prune = true;
  int order_cap = kDefaultOrderCap;
};

struct FieldCoefficient {
  FourierState value;
  /// Estimated absolute error of value.
  double noise = 0.0;
  /// noise > 10% of ‖value‖.
  bool noisy = false;
};

class ModifiedField {
 public:
  ModifiedField(PdeModel model, ButcherTableau tab, int n, Cutoff m,
                ModifiedFieldOptions opts = {});

  const PdeModel& model() const { return model_; }
  const ButcherTableau& tableau() const { return tab_; }
  int order() const { return n_; }
  Cutoff cutoff() const { return m_; }
  const ModifiedFieldOptions& options() const { return opts_; }

  /// f^1 … f^n at U (entry j−1 holds f^j). Entries the truncated field does
  /// not use may be left zero when pruning.
  std::vector<FourierState> coefficients(const FourierState& u) const;

  /// Σ_{j=p}^{n−1} h^j f^{j+1} from precomputed coefficients.
  FourierState correction(const std::vector<FourierState>& f, double h) const;

  FourierState evaluate(const FourierState& u, double h) const;

 private:
  PdeModel model_;
  ButcherTableau tab_;
  int n_;
  Cutoff m_;
  ModifiedFieldOptions opts_;
};

/// f^j(U) with a noise estimate. For the recursion engine the estimate
/// compares ε₀ with 2ε₀; for the exact engine it compares two interpolation
/// stencils.
FieldCoefficient modified_field_coefficient(const PdeModel& model, const ButcherTableau& tab,
                                            int j, const FourierState& u, Cutoff m,
                                            const ModifiedFieldOptions& opts = {});

/// Φ̃^h(U): flow of f̃ over time h.
FourierState modified_flow(const ModifiedField& field, const FourierState& u, double h,
                           const FlowTolerance& tol = {});
FourierState modified_flow(const PdeModel& model, const ButcherTableau& tab,
                           const TruncationPolicy& policy, const FourierState& u, double h,
                           const ModifiedFieldOptions& opts = {});

// ---------------------------------------------------------------------------
// Modified Hamiltonian

/// Nodes and weights of the n-point Gauss–Legendre rule on [0, 1].
void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights);

class ModifiedHamiltonian {
 public:
  /// The anchor defaults to the zero state; the nonlocal model needs one.
  ModifiedHamiltonian(ModifiedField field, std::optional<FourierState> anchor = std::nullopt,
                      int nodes = 16);

  const ModifiedField& field() const { return field_; }
  const FourierState& anchor() const { return anchor_; }

  double value(const FourierState& u, double h) const;

  struct Checked {
    double value;
    double value_alt;  // 24-node rule
    double rel_diff;
  };
  Checked value_checked(const FourierState& u, double h) const;

  /// H^j(U) for j = 1 … n (entry j−1); H^1 = H − H(anchor).
  std::vector<double> coefficients(const FourierState& u) const;

 private:
  double value_with(const FourierState& u, double h, int nodes) const;

  ModifiedField field_;
  FourierState anchor_;
  int nodes_;
};

double modified_hamiltonian_eval(const PdeModel& model, const ButcherTableau& tab,
                                 const TruncationPolicy& policy, const FourierState& u, double h,
                                 const ModifiedFieldOptions& opts = {},
                                 std::optional<FourierState> anchor = std::nullopt);

/// max over random W of |⟨∇H̃, W⟩ − ⟨J⁻¹f̃, W⟩| / (‖J⁻¹f̃‖‖W‖), with ⟨∇H̃, W⟩
/// from central differences.
double gradient_consistency(const PdeModel& model, const ButcherTableau& tab,
                            const TruncationPolicy& policy, const FourierState& u, double h,
                            int n_dirs, std::uint64_t seed = 1,
                            const ModifiedFieldOptions& opts = {},
                            std::optional<FourierState> anchor = std::nullopt);

}  // namespace hbea
