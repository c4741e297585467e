#include "hbea/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hbea/errors.hpp"
#include "hbea/real_coordinates.hpp"

namespace hbea {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::wave: return "wave";
    case ModelKind::nls: return "nls";
    case ModelKind::nonlocal_nls: return "nonlocal_nls";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "wave") return ModelKind::wave;
  if (s == "nls") return ModelKind::nls;
  if (s == "nonlocal_nls") return ModelKind::nonlocal_nls;
  throw InvalidArgument("unknown model '" + s + "'");
}

void ModelParams::validate() const {
  if (max_mode < 0) throw InvalidArgument("model: band must be >= 0");
  if (!std::isfinite(lambda)) throw InvalidArgument("model: lambda must be finite");
  if (kind == ModelKind::nls && sigma < 1) throw InvalidArgument("model: sigma must be >= 1");
  if (kind == ModelKind::nonlocal_nls && !(rho_min > 0.0)) {
    throw InvalidArgument("model: rho_min must be > 0");
  }
  if (kind == ModelKind::wave) {
    if (potential.coefficients.size() > 9) {
      throw InvalidArgument("model: polynomial potential degree must be <= 8");
    }
    for (double c : potential.coefficients) {
      if (!std::isfinite(c)) throw InvalidArgument("model: non-finite potential coefficient");
    }
    if (!std::isfinite(potential.gamma)) throw InvalidArgument("model: gamma must be finite");
  }
}

namespace {

int polynomial_degree(const std::vector<double>& c) {
  int d = static_cast<int>(c.size()) - 1;
  while (d > 0 && c[d] == 0.0) --d;
  return std::max(d, 0);
}

int default_n_phys(const ModelParams& p) {
  const int K = p.max_mode;
  int factor = 2;
  switch (p.kind) {
    case ModelKind::nls: factor = 2 * p.sigma + 2; break;
    case ModelKind::nonlocal_nls: factor = 2; break;
    case ModelKind::wave:
      factor = p.potential.kind == WavePotential::Kind::sine_gordon
                   ? 4
                   : std::max(2, polynomial_degree(p.potential.coefficients));
      break;
  }
  return FourierGrid::smooth_size(factor * K + 1);
}

PhaseSpace space_for(ModelKind kind) {
  if (kind == ModelKind::wave) return PhaseSpace{1.0, {1, 0}, true};
  return PhaseSpace{2.0, {0}, false};
}

GridSeries component_series(const std::vector<FourierState>& w, int comp) {
  const auto& g = w.front().grid();
  const int order = static_cast<int>(w.size()) - 1;
  GridSeries s(order, g.n_phys());
  for (int j = 0; j <= order; ++j) g.to_physical(w[j].component(comp), s.coeff(j));
  return s;
}

void series_to_component(const GridSeries& s, int comp, std::vector<FourierState>& out) {
  const auto& g = out.front().grid();
  for (int j = 0; j <= s.order(); ++j) g.to_coefficients(s.coeff(j), out[j].component(comp));
}

}  // namespace

PdeModel::PdeModel(ModelParams params) : params_(std::move(params)) {
  params_.validate();
  space_ = space_for(params_.kind);
  const int n_phys = params_.n_phys > 0 ? params_.n_phys : default_n_phys(params_);
  grid_ = make_grid(params_.max_mode, n_phys);
}

bool PdeModel::linear() const {
  switch (params_.kind) {
    case ModelKind::nls:
    case ModelKind::nonlocal_nls: return params_.lambda == 0.0;
    case ModelKind::wave:
      if (params_.potential.kind == WavePotential::Kind::sine_gordon) {
        return params_.potential.gamma == 0.0;
      }
      return polynomial_degree(params_.potential.coefficients) <= 2;
  }
  return false;
}

void PdeModel::require_compatible(const FourierState& u) const {
  if (u.empty() || u.space() != space_ || u.max_mode() != max_mode() ||
      u.grid().n_phys() != grid_->n_phys()) {
    throw InvalidArgument("state does not match model " + name());
  }
}

Eigen::MatrixXcd PdeModel::a_block(int k) const {
  const double k2 = static_cast<double>(k) * k;
  if (params_.kind == ModelKind::wave) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
    if (k != 0) {
      a(0, 1) = 1.0;
      a(1, 0) = -k2;
    }
    return a;
  }
  Eigen::MatrixXcd a(1, 1);
  a(0, 0) = cd(0.0, -k2);
  return a;
}

FourierState PdeModel::apply_A(const FourierState& u) const {
  require_compatible(u);
  FourierState out = u.zeros_like();
  const int K = max_mode();
  for (int k = -K; k <= K; ++k) {
    const double k2 = static_cast<double>(k) * k;
    if (params_.kind == ModelKind::wave) {
      if (k == 0) continue;
      out.at(0, k) = u.at(1, k);
      out.at(1, k) = -k2 * u.at(0, k);
    } else {
      out.at(0, k) = cd(0.0, -k2) * u.at(0, k);
    }
  }
  return out;
}

double PdeModel::mass(const FourierState& u) const {
  double n = 0.0;
  for (const auto& c : u.component(0)) n += std::norm(c);
  return n;
}

void PdeModel::check_domain(const FourierState& u) const {
  if (params_.kind != ModelKind::nonlocal_nls) return;
  const double n = mass(u);
  if (!(n >= params_.rho_min)) {
    throw DomainError("nonlocal_nls: mass " + std::to_string(n) + " below rho_min");
  }
}

std::vector<FourierState> PdeModel::apply_B_series(const std::vector<FourierState>& w_in,
                                                   Cutoff m) const {
  if (w_in.empty()) throw InvalidArgument("apply_B_series: empty series");
  std::vector<FourierState> w;
  w.reserve(w_in.size());
  for (const auto& s : w_in) {
    require_compatible(s);
    w.push_back(project(s, m));
  }
  const int order = static_cast<int>(w.size()) - 1;
  std::vector<FourierState> out(w.size(), zero_state());

  switch (params_.kind) {
    case ModelKind::nls: {
      if (params_.lambda == 0.0) break;
      const GridSeries u = component_series(w, 0);
      const GridSeries r = (u * u.conj()).pow(params_.sigma) * u;
      series_to_component(cd(0.0, -params_.lambda) * r, 0, out);
      break;
    }
    case ModelKind::nonlocal_nls: {
      check_domain(w[0]);
      GridSeries n(order, 1);
      const int K = max_mode();
      for (int j = 0; j <= order; ++j) {
        cd acc = 0.0;
        for (int i = 0; i <= j; ++i) {
          for (int k = -K; k <= K; ++k) acc += w[i].at(0, k) * std::conj(w[j - i].at(0, k));
        }
        n.at(j, 0) = acc;
      }
      // V'(N) = −1/N², so B = iλ u / N².
      const GridSeries inv2 = n.reciprocal().pow(2);
      const cd il(0.0, params_.lambda);
      for (int j = 0; j <= order; ++j) {
        for (int i = 0; i <= j; ++i) {
          auto dst = out[j].component(0);
          auto src = w[j - i].component(0);
          const cd f = il * inv2.at(i, 0);
          for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += f * src[x];
        }
      }
      break;
    }
    case ModelKind::wave: {
      const auto& pot = params_.potential;
      const bool nonzero = pot.kind == WavePotential::Kind::sine_gordon
                               ? pot.gamma != 0.0
                               : pot.coefficients.size() > 1;
      if (nonzero) {
        GridSeries u = component_series(w, 0);
        for (int j = 0; j <= order; ++j) {
          for (auto& v : u.coeff(j)) v = cd(v.real(), 0.0);
        }
        GridSeries force;
        if (pot.kind == WavePotential::Kind::sine_gordon) {
          force = cd(-pot.gamma) * u.sin();
        } else {
          std::vector<double> dv;
          for (std::size_t j = 1; j < pot.coefficients.size(); ++j) {
            dv.push_back(static_cast<double>(j) * pot.coefficients[j]);
          }
          force = cd(-1.0) * GridSeries::polynomial(dv, u);
        }
        series_to_component(force, 1, out);
      }
      // Jordan block of the zero mode.
      for (int j = 0; j <= order; ++j) out[j].at(0, 0) += w[j].at(1, 0);
      break;
    }
  }
  for (auto& s : out) {
    s.enforce_real_symmetry();
    project_in_place(s, m);
  }
  return out;
}

FourierState PdeModel::apply_B(const FourierState& u, Cutoff m) const {
  return apply_B_series({u}, m).front();
}

FourierState PdeModel::apply_F(const FourierState& u, Cutoff m) const {
  return apply_A(project(u, m)) + apply_B(u, m);
}

double PdeModel::hamiltonian(const FourierState& u) const {
  require_compatible(u);
  check_domain(u);
  const int K = max_mode();
  double grad = 0.0;
  for (int k = -K; k <= K; ++k) grad += static_cast<double>(k) * k * std::norm(u.at(0, k));
  const auto& g = *grid_;
  switch (params_.kind) {
    case ModelKind::nls: {
      double pot = 0.0;
      if (params_.lambda != 0.0) {
        std::vector<cd> vals(g.n_phys());
        g.to_physical(u.component(0), vals);
        const double e = params_.sigma + 1.0;
        for (const auto& z : vals) pot += std::pow(std::norm(z), e);
        pot *= params_.lambda / e * g.dx();
      }
      return 0.5 * grad + 0.5 * pot;
    }
    case ModelKind::nonlocal_nls:
      return 0.5 * grad + 0.5 * params_.lambda / mass(u);
    case ModelKind::wave: {
      double kin = 0.0;
      for (const auto& c : u.component(1)) kin += std::norm(c);
      std::vector<cd> vals(g.n_phys());
      g.to_physical(u.component(0), vals);
      const auto& pot = params_.potential;
      double v = 0.0;
      for (const auto& z : vals) {
        const double x = z.real();
        if (pot.kind == WavePotential::Kind::sine_gordon) {
          v += pot.gamma * (1.0 - std::cos(x));
        } else {
          double acc = 0.0;
          for (auto it = pot.coefficients.rbegin(); it != pot.coefficients.rend(); ++it) {
            acc = acc * x + *it;
          }
          v += acc;
        }
      }
      return 0.5 * kin + 0.5 * grad + v * g.dx();
    }
  }
  return 0.0;
}

FourierState PdeModel::apply_J_inv(const FourierState& u) const {
  require_compatible(u);
  FourierState out = u.zeros_like();
  const int K = max_mode();
  if (params_.kind == ModelKind::wave) {
    for (int k = -K; k <= K; ++k) {
      const double w = (k == 0 ? 1.0 : 0.0) + static_cast<double>(k) * k;
      out.at(0, k) = -u.at(1, k) / w;
      out.at(1, k) = u.at(0, k);
    }
  } else {
    for (int k = -K; k <= K; ++k) out.at(0, k) = cd(0.0, 1.0) * u.at(0, k);
  }
  return out;
}

double check_h2_selfadjoint(const PdeModel& model, const FourierState& u_in, Cutoff m, int n_dirs,
                            std::uint64_t seed) {
  const FourierState u = project(u_in, m);
  std::mt19937_64 rng(seed);
  const double scale = 1.0 + y_norm(u);
  auto jdb = [&](const FourierState& w) {
    const double eps = 1e-4 * scale / std::max(y_norm(w), 1e-300);
    auto b = [&](double s) {
      FourierState x = u;
      x.axpy(s, w);
      return model.apply_B(x, m);
    };
    FourierState d = b(2 * eps);
    d *= -1.0;
    d.axpy(8.0, b(eps));
    d.axpy(-8.0, b(-eps));
    d += b(-2 * eps);
    d *= 1.0 / (12.0 * eps);
    return model.apply_J_inv(d);
  };
  double worst = 0.0;
  for (int i = 0; i < n_dirs; ++i) {
    const FourierState w1 = random_state(model.grid_ptr(), model.space(), m, rng);
    const FourierState w2 = random_state(model.grid_ptr(), model.space(), m, rng);
    const FourierState j1 = jdb(w1);
    const FourierState j2 = jdb(w2);
    const double a = y_inner(j1, w2);
    const double b = y_inner(w1, j2);
    const double ref = std::max({y_norm(j1) * y_norm(w2), y_norm(j2) * y_norm(w1), 1e-300});
    worst = std::max(worst, std::abs(a - b) / ref);
  }
  return worst;
}

double grad_H_consistency(const PdeModel& model, const FourierState& u_in, Cutoff m) {
  const FourierState u = project(u_in, m);
  const RealCoordinates rc(model, m);
  const double eps = 1e-3 * (1.0 + rc.to_real(u).cwiseAbs().maxCoeff());
  const FourierState grad =
      rc.gradient([&](const FourierState& x) { return model.hamiltonian(x); }, u, eps);
  const FourierState jf = model.apply_J_inv(model.apply_F(u, m));
  const double diff = y_norm(jf - grad);
  const double ref = std::max({y_norm(grad), y_norm(jf), 1e-300});
  return diff == 0.0 ? 0.0 : diff / ref;
}

}  // namespace hbea
