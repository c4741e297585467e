#pragma once

// Fourier-space representation of periodic fields on the circle, Gevrey
// norms and spectral projectors.
//
// Coefficients follow u(x) = (2π)^{-1/2} Σ_k û_k e^{ikx}, so the plain L²
// inner product is Σ_k û_k conj(v̂_k) without extra factors.

#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace hbea {

using cd = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Physical grid and transform plans for the symmetric band k ∈ {−K,…,K}.
/// Immutable and shared between states; transforms are safe to call
/// concurrently.
class FourierGrid {
 public:
  /// `n_phys == 0` picks the smallest FFT-friendly size ≥ 2K+1.
  FourierGrid(int max_mode, int n_phys = 0);
  ~FourierGrid();
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  int max_mode() const { return max_mode_; }
  int band_size() const { return 2 * max_mode_ + 1; }
  int n_phys() const { return n_phys_; }
  double dx() const { return kTwoPi / n_phys_; }
  double domain_length() const { return kTwoPi; }
  double x(int j) const { return dx() * j; }

  /// Band coefficients → values at x_j = j·dx.
  void to_physical(std::span<const cd> coeffs, std::span<cd> values) const;
  /// Grid values → band coefficients (exact for band-limited data).
  void to_coefficients(std::span<const cd> values, std::span<cd> coeffs) const;

  /// Smallest n ≥ lower bound of the form 2^a 3^b 5^c.
  static int smooth_size(int lower_bound);

 private:
  int max_mode_;
  int n_phys_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

using GridPtr = std::shared_ptr<const FourierGrid>;

GridPtr make_grid(int max_mode, int n_phys = 0);

/// How a state's modes are weighted and which of them a cutoff keeps.
/// The |A|-eigenvalue of mode k is |k|^q; component c carries the extra
/// Sobolev weight |k|^{2·base_order[c]} in the plain Y-norm.
struct PhaseSpace {
  double q = 1.0;
  std::vector<int> base_order{0};
  bool real_field = false;

  int components() const { return static_cast<int>(base_order.size()); }
  double eigenvalue(int k) const;

  static PhaseSpace scalar(double q = 1.0) { return PhaseSpace{q, {0}, false}; }

  bool operator==(const PhaseSpace&) const = default;
};

/// Spectral cutoff m in |A|-eigenvalue units. The default value keeps the
/// whole working band.
class Cutoff {
 public:
  constexpr Cutoff() = default;
  constexpr explicit Cutoff(std::int64_t m) : m_(m) {}

  static constexpr Cutoff full() { return Cutoff(); }

  constexpr bool is_full() const { return m_ == kFull; }
  constexpr std::int64_t value() const { return m_; }
  bool admits(double eigenvalue) const {
    return is_full() || eigenvalue <= static_cast<double>(m_) * (1.0 + 1e-12);
  }

  friend constexpr bool operator==(Cutoff, Cutoff) = default;
  friend constexpr Cutoff min(Cutoff a, Cutoff b) { return a.m_ < b.m_ ? a : b; }

 private:
  static constexpr std::int64_t kFull = std::numeric_limits<std::int64_t>::max();
  std::int64_t m_ = kFull;
};

struct GevreyIndex {
  double tau = 0.0;
  double ell = 0.0;
  double q = 1.0;

  void validate() const;
};

/// Complex Fourier coefficients of a (possibly two-component) field on the
/// band of its grid. Value type.
class FourierState {
 public:
  FourierState() = default;
  FourierState(GridPtr grid, PhaseSpace space);

  const FourierGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const PhaseSpace& space() const { return space_; }
  int components() const { return space_.components(); }
  int max_mode() const { return grid_->max_mode(); }
  bool empty() const { return grid_ == nullptr; }

  cd& at(int comp, int k) { return coeffs_[index(comp, k)]; }
  cd at(int comp, int k) const { return coeffs_[index(comp, k)]; }

  std::span<cd> component(int comp);
  std::span<const cd> component(int comp) const;
  std::span<cd> data() { return coeffs_; }
  std::span<const cd> data() const { return coeffs_; }

  FourierState zeros_like() const { return FourierState(grid_, space_); }
  bool same_layout(const FourierState& other) const;

  FourierState& operator+=(const FourierState& other);
  FourierState& operator-=(const FourierState& other);
  FourierState& operator*=(double s);
  FourierState& operator*=(cd s);
  /// this += a·x
  FourierState& axpy(double a, const FourierState& x);

  /// Restores û_{−k} = conj(û_k) exactly for real fields; no-op otherwise.
  void enforce_real_symmetry();

  double max_abs() const;

  friend FourierState operator+(FourierState a, const FourierState& b) { return a += b; }
  friend FourierState operator-(FourierState a, const FourierState& b) { return a -= b; }
  friend FourierState operator*(double s, FourierState a) { return a *= s; }
  friend FourierState operator*(cd s, FourierState a) { return a *= s; }

  bool operator==(const FourierState& other) const;

 private:
  std::size_t index(int comp, int k) const {
    return static_cast<std::size_t>(comp) * grid_->band_size() + (k + grid_->max_mode());
  }

  GridPtr grid_;
  PhaseSpace space_;
  std::vector<cd> coeffs_;
};

/// Weight of |û_{c,k}|² in the Y_{τ,ℓ} norm.
double mode_weight(const PhaseSpace& space, int comp, int k, const GevreyIndex& idx);

double gevrey_norm(const FourierState& state, const GevreyIndex& idx);

/// Plain Y-norm (τ = 0, ℓ = 0).
double y_norm(const FourierState& state);

/// Real Y inner product Re Σ w_{c,k} û conj(v̂) with the plain weights.
double y_inner(const FourierState& a, const FourierState& b);

/// Stage-stack norm sqrt(Σ_i ‖W^i‖²).
double y_norm(std::span<const FourierState> stages);

/// P_m: zeroes every mode whose |A|-eigenvalue exceeds m.
FourierState project(const FourierState& state, Cutoff m);
void project_in_place(FourierState& state, Cutoff m);

/// Largest |k| admitted by the cutoff on this space (capped by the band).
int band_limit(const PhaseSpace& space, Cutoff m, int max_mode);

struct TailBound {
  double lhs;
  double rhs;
};

/// lhs = ‖(I − P_m)U‖_Y, rhs = m^{−ℓ} e^{−τ m^{1/q}} ‖U‖_{τ,ℓ}.
TailBound tail_bound_check(const FourierState& state, const GevreyIndex& idx, Cutoff m);

/// (pq / (e(σ−τ)))^{pq}, the bound on ‖A^p‖ from Y_{σ,ℓ} to Y_{τ,ℓ}.
double operator_power_bound(double sigma, double tau, int p, double q);

/// Physical values per component at the grid points.
std::vector<std::vector<cd>> to_physical(const FourierState& state);

/// Inverse of to_physical; real fields are symmetrised.
void from_physical(const std::vector<std::vector<cd>>& values, FourierState& out);

/// Uniform draw in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

/// Random coefficients on the admitted modes, |û_{c,k}| ≤ scale·e^{−decay|k|}.
FourierState random_state(GridPtr grid, const PhaseSpace& space, Cutoff m, std::mt19937_64& rng,
                          double scale = 1.0, double decay = 0.0);

}  // namespace hbea
