#include "hbea/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "hbea/errors.hpp"

namespace hbea {

namespace {

// The FFTW planner is not re-entrant; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// FourierGrid

int FourierGrid::smooth_size(int lower_bound) {
  for (int n = std::max(lower_bound, 1);; ++n) {
    int r = n;
    for (int f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return n;
  }
}

FourierGrid::FourierGrid(int max_mode, int n_phys) : max_mode_(max_mode) {
  if (max_mode < 0) throw InvalidArgument("FourierGrid: max_mode must be >= 0");
  const int min_phys = 2 * max_mode + 1;
  n_phys_ = n_phys == 0 ? smooth_size(min_phys) : n_phys;
  if (n_phys_ < min_phys) {
    throw InvalidArgument("FourierGrid: n_phys must be >= 2K+1");
  }
  std::vector<fftw_complex> in(n_phys_), out(n_phys_);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(n_phys_, in.data(), out.data(), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(n_phys_, in.data(), out.data(), FFTW_BACKWARD, flags);
}

FourierGrid::~FourierGrid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void FourierGrid::to_physical(std::span<const cd> coeffs, std::span<cd> values) const {
  const int n = n_phys_;
  std::vector<cd> buf(n, cd(0.0));
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    buf[(k % n + n) % n] = coeffs[k + max_mode_];
  }
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                   reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(values.data()));
  const double scale = 1.0 / std::sqrt(kTwoPi);
  for (int j = 0; j < n; ++j) values[j] *= scale;
}

void FourierGrid::to_coefficients(std::span<const cd> values, std::span<cd> coeffs) const {
  const int n = n_phys_;
  std::vector<cd> in(values.begin(), values.end());
  std::vector<cd> out(n);
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = std::sqrt(kTwoPi) / n;
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    coeffs[k + max_mode_] = out[(k % n + n) % n] * scale;
  }
}

GridPtr make_grid(int max_mode, int n_phys) {
  return std::make_shared<const FourierGrid>(max_mode, n_phys);
}

// ---------------------------------------------------------------------------
// PhaseSpace / GevreyIndex

double PhaseSpace::eigenvalue(int k) const {
  const double ak = std::abs(k);
  if (q == 1.0) return ak;
  if (q == 2.0) return ak * ak;
  return std::pow(ak, q);
}

void GevreyIndex::validate() const {
  if (!(tau >= 0.0)) throw InvalidArgument("GevreyIndex: tau must be >= 0");
  if (!(ell >= 0.0)) throw InvalidArgument("GevreyIndex: ell must be >= 0");
  if (!(q > 0.0)) throw InvalidArgument("GevreyIndex: q must be > 0");
}

// ---------------------------------------------------------------------------
// FourierState

FourierState::FourierState(GridPtr grid, PhaseSpace space)
    : grid_(std::move(grid)), space_(std::move(space)) {
  if (!grid_) throw InvalidArgument("FourierState: null grid");
  if (space_.components() < 1) throw InvalidArgument("FourierState: no components");
  coeffs_.assign(static_cast<std::size_t>(space_.components()) * grid_->band_size(), cd(0.0));
}

std::span<cd> FourierState::component(int comp) {
  return std::span<cd>(coeffs_).subspan(static_cast<std::size_t>(comp) * grid_->band_size(),
                                        grid_->band_size());
}

std::span<const cd> FourierState::component(int comp) const {
  return std::span<const cd>(coeffs_).subspan(
      static_cast<std::size_t>(comp) * grid_->band_size(), grid_->band_size());
}

bool FourierState::same_layout(const FourierState& other) const {
  return grid_ && other.grid_ &&
         (grid_ == other.grid_ || (grid_->max_mode() == other.grid_->max_mode() &&
                                   grid_->n_phys() == other.grid_->n_phys())) &&
         space_ == other.space_;
}

namespace {
void require_layout(const FourierState& a, const FourierState& b) {
  if (!a.same_layout(b)) throw InvalidArgument("FourierState: layout mismatch");
}
}  // namespace

FourierState& FourierState::operator+=(const FourierState& other) {
  require_layout(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

FourierState& FourierState::operator-=(const FourierState& other) {
  require_layout(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

FourierState& FourierState::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierState& FourierState::operator*=(cd s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierState& FourierState::axpy(double a, const FourierState& x) {
  require_layout(*this, x);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
  return *this;
}

void FourierState::enforce_real_symmetry() {
  if (!space_.real_field) return;
  const int K = max_mode();
  for (int c = 0; c < components(); ++c) {
    at(c, 0) = cd(at(c, 0).real(), 0.0);
    for (int k = 1; k <= K; ++k) {
      const cd avg = 0.5 * (at(c, k) + std::conj(at(c, -k)));
      at(c, k) = avg;
      at(c, -k) = std::conj(avg);
    }
  }
}

double FourierState::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool FourierState::operator==(const FourierState& other) const {
  return same_layout(other) && coeffs_ == other.coeffs_;
}

// ---------------------------------------------------------------------------
// Norms and projectors

double mode_weight(const PhaseSpace& space, int comp, int k, const GevreyIndex& idx) {
  if (k == 0) return 1.0;
  const double ak = std::abs(k);
  const double lambda = space.eigenvalue(k);
  double w = 1.0;
  const int base = space.base_order[comp];
  if (base != 0) w *= std::pow(ak, 2.0 * base);
  if (idx.ell != 0.0) w *= std::pow(lambda, 2.0 * idx.ell);
  if (idx.tau != 0.0) w *= std::exp(2.0 * idx.tau * std::pow(lambda, 1.0 / idx.q));
  return w;
}

double gevrey_norm(const FourierState& state, const GevreyIndex& idx) {
  idx.validate();
  const int K = state.max_mode();
  double sum = 0.0;
  for (int c = 0; c < state.components(); ++c) {
    for (int k = -K; k <= K; ++k) {
      const double a = std::norm(state.at(c, k));
      if (a != 0.0) sum += mode_weight(state.space(), c, k, idx) * a;
    }
  }
  return std::sqrt(sum);
}

double y_norm(const FourierState& state) {
  return gevrey_norm(state, GevreyIndex{0.0, 0.0, state.space().q});
}

double y_inner(const FourierState& a, const FourierState& b) {
  require_layout(a, b);
  const GevreyIndex plain{0.0, 0.0, a.space().q};
  const int K = a.max_mode();
  double sum = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (int k = -K; k <= K; ++k) {
      sum += mode_weight(a.space(), c, k, plain) * std::real(a.at(c, k) * std::conj(b.at(c, k)));
    }
  }
  return sum;
}

double y_norm(std::span<const FourierState> stages) {
  double sum = 0.0;
  for (const auto& s : stages) {
    const double n = y_norm(s);
    sum += n * n;
  }
  return std::sqrt(sum);
}

void project_in_place(FourierState& state, Cutoff m) {
  if (m.is_full()) return;
  const int K = state.max_mode();
  for (int k = -K; k <= K; ++k) {
    if (m.admits(state.space().eigenvalue(k))) continue;
    for (int c = 0; c < state.components(); ++c) state.at(c, k) = 0.0;
  }
}

FourierState project(const FourierState& state, Cutoff m) {
  FourierState out = state;
  project_in_place(out, m);
  return out;
}

int band_limit(const PhaseSpace& space, Cutoff m, int max_mode) {
  int k = 0;
  while (k < max_mode && m.admits(space.eigenvalue(k + 1))) ++k;
  return k;
}

TailBound tail_bound_check(const FourierState& state, const GevreyIndex& idx, Cutoff m) {
  idx.validate();
  const FourierState tail = state - project(state, m);
  const double lhs = y_norm(tail);
  if (m.is_full()) return {lhs, 0.0};
  const double mm = static_cast<double>(m.value());
  double factor;
  if (mm <= 0.0) {
    factor = idx.ell > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  } else {
    factor = std::pow(mm, -idx.ell) * std::exp(-idx.tau * std::pow(mm, 1.0 / idx.q));
  }
  const double norm = gevrey_norm(state, idx);
  return {lhs, norm == 0.0 ? 0.0 : factor * norm};
}

double operator_power_bound(double sigma, double tau, int p, double q) {
  if (!(sigma > tau)) throw InvalidArgument("operator_power_bound: sigma must exceed tau");
  if (p < 0) throw InvalidArgument("operator_power_bound: p must be >= 0");
  if (p == 0) return 1.0;
  const double pq = p * q;
  return std::pow(pq / (std::exp(1.0) * (sigma - tau)), pq);
}

std::vector<std::vector<cd>> to_physical(const FourierState& state) {
  const auto& g = state.grid();
  std::vector<std::vector<cd>> out(state.components(), std::vector<cd>(g.n_phys()));
  for (int c = 0; c < state.components(); ++c) {
    g.to_physical(state.component(c), out[c]);
    if (state.space().real_field) {
      for (auto& v : out[c]) v = cd(v.real(), 0.0);
    }
  }
  return out;
}

void from_physical(const std::vector<std::vector<cd>>& values, FourierState& out) {
  const auto& g = out.grid();
  for (int c = 0; c < out.components(); ++c) g.to_coefficients(values[c], out.component(c));
  out.enforce_real_symmetry();
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

FourierState random_state(GridPtr grid, const PhaseSpace& space, Cutoff m, std::mt19937_64& rng,
                          double scale, double decay) {
  FourierState u(std::move(grid), space);
  const int K = u.max_mode();
  for (int c = 0; c < u.components(); ++c) {
    for (int k = -K; k <= K; ++k) {
      const double re = 2.0 * uniform01(rng) - 1.0;
      const double im = 2.0 * uniform01(rng) - 1.0;
      if (!m.admits(space.eigenvalue(k))) continue;
      u.at(c, k) = scale * std::exp(-decay * std::abs(k)) * cd(re, im);
    }
  }
  u.enforce_real_symmetry();
  return u;
}

}  // namespace hbea
