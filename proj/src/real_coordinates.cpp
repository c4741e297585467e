#include "hbea/real_coordinates.hpp"

#include <cmath>

namespace hbea {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

RealCoordinates::RealCoordinates(GridPtr grid, PhaseSpace space, Cutoff m)
    : grid_(std::move(grid)), space_(std::move(space)) {
  const int K = grid_->max_mode();
  const GevreyIndex plain{0.0, 0.0, space_.q};
  std::vector<double> w;
  for (int c = 0; c < space_.components(); ++c) {
    const int k_lo = space_.real_field ? 0 : -K;
    for (int k = k_lo; k <= K; ++k) {
      if (!m.admits(space_.eigenvalue(k))) continue;
      const double wk = mode_weight(space_, c, k, plain);
      slots_.push_back({c, k, false});
      w.push_back(wk);
      if (space_.real_field && k == 0) continue;
      slots_.push_back({c, k, true});
      w.push_back(wk);
    }
  }
  weights_ = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

Eigen::VectorXd RealCoordinates::to_real(const FourierState& u) const {
  Eigen::VectorXd x(dim());
  const double s = space_.real_field ? kSqrt2 : 1.0;
  for (int i = 0; i < dim(); ++i) {
    const auto& sl = slots_[i];
    const cd v = u.at(sl.comp, sl.k);
    const double f = (space_.real_field && sl.k == 0) ? 1.0 : s;
    x[i] = f * (sl.imag ? v.imag() : v.real());
  }
  return x;
}

FourierState RealCoordinates::from_real(const Eigen::VectorXd& x) const {
  FourierState u(grid_, space_);
  const double s = space_.real_field ? 1.0 / kSqrt2 : 1.0;
  for (int i = 0; i < dim(); ++i) {
    const auto& sl = slots_[i];
    const double f = (space_.real_field && sl.k == 0) ? 1.0 : s;
    cd& v = u.at(sl.comp, sl.k);
    if (sl.imag) {
      v = cd(v.real(), f * x[i]);
    } else {
      v = cd(f * x[i], v.imag());
    }
    if (space_.real_field && sl.k > 0) u.at(sl.comp, -sl.k) = std::conj(v);
  }
  return u;
}

FourierState RealCoordinates::basis(int i) const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim());
  e[i] = 1.0;
  return from_real(e);
}

double RealCoordinates::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return (weights_.array() * a.array() * b.array()).sum();
}

Eigen::MatrixXd RealCoordinates::omega(const PdeModel& model) const {
  Eigen::MatrixXd om(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    const Eigen::VectorXd ji = to_real(model.apply_J_inv(basis(i)));
    for (int j = 0; j < dim(); ++j) om(i, j) = weights_[j] * ji[j];
  }
  return om;
}

}  // namespace hbea
