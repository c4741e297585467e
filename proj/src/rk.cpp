#include "hbea/rk.hpp"

#include <cmath>

#include "hbea/errors.hpp"
#include "hbea/real_coordinates.hpp"

namespace hbea {

namespace {

constexpr double kPoleCond = 1e14;

double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double lo = sv[sv.size() - 1];
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : sv[0] / lo;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tableaux

ButcherTableau ButcherTableau::make(std::string id, Eigen::MatrixXd a, Eigen::VectorXd b,
                                    int order, bool symplectic, bool a_stable) {
  ButcherTableau t;
  t.id = std::move(id);
  t.s = static_cast<int>(b.size());
  t.c = a.rowwise().sum();
  t.a = std::move(a);
  t.b = std::move(b);
  t.order = order;
  t.symplectic = symplectic;
  t.a_stable = a_stable;
  t.norm_a = t.a.cwiseAbs().rowwise().sum().maxCoeff();
  t.norm_b = t.b.cwiseAbs().sum();
  t.eta = 2.0 * std::max(t.norm_a, t.norm_b / (2.0 * std::log(2.0) - 1.0));
  t.gamma = std::exp(1.0) * (2.0 + 1.65 * t.eta + t.norm_b);
  return t;
}

double ButcherTableau::symplecticity_residual() const {
  double r = 0.0;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      r = std::max(r, std::abs(b[i] * a(i, j) + b[j] * a(j, i) - b[i] * b[j]));
  return r;
}

ButcherTableau gauss_legendre(int s) {
  Eigen::MatrixXd a(s, s);
  Eigen::VectorXd b(s);
  switch (s) {
    case 1:
      a << 0.5;
      b << 1.0;
      return ButcherTableau::make("gauss1", a, b, 2, true, true);
    case 2: {
      const double r3 = std::sqrt(3.0);
      a << 0.25, 0.25 - r3 / 6.0,
           0.25 + r3 / 6.0, 0.25;
      b << 0.5, 0.5;
      return ButcherTableau::make("gauss2", a, b, 4, true, true);
    }
    case 3: {
      const double r15 = std::sqrt(15.0);
      a << 5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0,
           5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0,
           5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0;
      b << 5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0;
      return ButcherTableau::make("gauss3", a, b, 6, true, true);
    }
    default:
      throw InvalidArgument("gauss_legendre: s must be 1, 2 or 3");
  }
}

ButcherTableau tableau_by_id(const std::string& id) {
  if (id == "midpoint" || id == "gauss1") return gauss_legendre(1);
  if (id == "gauss2") return gauss_legendre(2);
  if (id == "gauss3") return gauss_legendre(3);
  throw InvalidArgument("unknown tableau '" + id + "'");
}

cd stability_function(const ButcherTableau& tab, cd z) {
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(tab.s, tab.s) - z * tab.a.cast<cd>();
  if (condition_number(m) > kPoleCond) throw PoleError("stability_function: I - za is singular");
  const Eigen::VectorXcd x = m.fullPivLu().solve(Eigen::VectorXcd::Ones(tab.s));
  return 1.0 + z * tab.b.cast<cd>().dot(x);
}

std::string to_string(StageScheme s) {
  return s == StageScheme::fixed_point ? "fixed_point" : "newton_on_modes";
}

StageScheme stage_scheme_from_string(const std::string& s) {
  if (s == "fixed_point") return StageScheme::fixed_point;
  if (s == "newton_on_modes" || s == "newton") return StageScheme::newton_on_modes;
  throw InvalidArgument("unknown stage scheme '" + s + "'");
}

void StageSolveConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("stage solver: tol must be > 0");
  if (max_iter < 1) throw InvalidArgument("stage solver: max_iter must be >= 1");
}

// ---------------------------------------------------------------------------
// StepMap

StepMap::StepMap(PdeModel model, ButcherTableau tab, double h, Cutoff m)
    : model_(std::move(model)), tab_(std::move(tab)), h_(h), m_(m) {
  if (std::isnan(h)) throw InvalidArgument("StepMap: h is NaN");
  const int K = model_.max_mode();
  const int s = tab_.s;
  const int c = model_.components();
  resolvent_.resize(2 * K + 1);
  stability_.resize(2 * K + 1);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s * c, s * c);
  for (int k = -K; k <= K; ++k) {
    if (!m_.admits(model_.space().eigenvalue(k))) continue;
    const Eigen::MatrixXcd ak = model_.a_block(k);
    const Eigen::MatrixXcd sys = id - h_ * kron(tab_.a, ak);
    if (condition_number(sys) > kPoleCond) {
      throw PoleError("StepMap: stage block singular at mode " + std::to_string(k));
    }
    Eigen::MatrixXcd inv = sys.fullPivLu().inverse();
    Eigen::MatrixXcd ones(s * c, c);
    for (int i = 0; i < s; ++i) ones.block(i * c, 0, c, c) = Eigen::MatrixXcd::Identity(c, c);
    const Eigen::MatrixXcd x = inv * ones;
    Eigen::MatrixXcd sk = Eigen::MatrixXcd::Identity(c, c);
    for (int i = 0; i < s; ++i) sk += h_ * tab_.b[i] * ak * x.block(i * c, 0, c, c);
    resolvent_[k + K] = std::move(inv);
    stability_[k + K] = std::move(sk);
  }
}

std::vector<FourierState> StepMap::apply_resolvent(const std::vector<FourierState>& x) const {
  const int K = model_.max_mode();
  const int s = tab_.s;
  const int c = model_.components();
  std::vector<FourierState> out(s, x.front().zeros_like());
  Eigen::VectorXcd v(s * c);
  for (int k = -K; k <= K; ++k) {
    const auto& mk = resolvent_[k + K];
    if (mk.size() == 0) continue;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < c; ++j) v[i * c + j] = x[i].at(j, k);
    const Eigen::VectorXcd y = mk * v;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < c; ++j) out[i].at(j, k) = y[i * c + j];
  }
  return out;
}

std::vector<FourierState> StepMap::stage_map(const FourierState& u,
                                             const std::vector<FourierState>& w) const {
  const int s = tab_.s;
  std::vector<FourierState> bw;
  bw.reserve(s);
  for (int l = 0; l < s; ++l) bw.push_back(model_.apply_B(w[l], m_));
  std::vector<FourierState> rhs(s, u);
  for (int i = 0; i < s; ++i)
    for (int l = 0; l < s; ++l)
      if (tab_.a(i, l) != 0.0) rhs[i].axpy(h_ * tab_.a(i, l), bw[l]);
  return apply_resolvent(rhs);
}

StageSolution StepMap::solve_stages(const FourierState& u_in, const StageSolveConfig& cfg) const {
  cfg.validate();
  model_.require_compatible(u_in);
  const FourierState u = project(u_in, m_);
  if (cfg.scheme == StageScheme::newton_on_modes) return solve_newton(u, cfg);
  const double target = cfg.tol * std::max(1.0, y_norm(u));
  std::vector<FourierState> w = apply_resolvent(std::vector<FourierState>(tab_.s, u));
  double res = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    std::vector<FourierState> next = stage_map(u, w);
    double sq = 0.0;
    for (int i = 0; i < tab_.s; ++i) {
      const double d = y_norm(next[i] - w[i]);
      sq += d * d;
    }
    res = std::sqrt(sq);
    w = std::move(next);
    if (!std::isfinite(res)) break;
    if (res <= target) return {std::move(w), it, res};
  }
  throw ConvergenceError("stage fixed point did not converge", res, cfg.max_iter);
}

StageSolution StepMap::solve_newton(const FourierState& u, const StageSolveConfig& cfg) const {
  const int s = tab_.s;
  const RealCoordinates rc(model_, m_);
  const int d = rc.dim();
  const double target = cfg.tol * std::max(1.0, y_norm(u));
  std::vector<FourierState> w = apply_resolvent(std::vector<FourierState>(s, u));

  auto residual = [&](const std::vector<FourierState>& ws, Eigen::VectorXd& r) {
    const std::vector<FourierState> pw = stage_map(u, ws);
    r.resize(s * d);
    double sq = 0.0;
    for (int i = 0; i < s; ++i) {
      const FourierState diff = ws[i] - pw[i];
      r.segment(i * d, d) = rc.to_real(diff);
      const double n = y_norm(diff);
      sq += n * n;
    }
    return std::sqrt(sq);
  };

  Eigen::VectorXd r;
  double res = residual(w, r);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    if (res <= target) return {std::move(w), it - 1, res};
    Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(s * d, s * d);
    for (int l = 0; l < s; ++l) {
      for (int q = 0; q < d; ++q) {
        const FourierState dbv = model_.apply_B_series({w[l], rc.basis(q)}, m_)[1];
        std::vector<FourierState> x(s, u.zeros_like());
        for (int i = 0; i < s; ++i)
          if (tab_.a(i, l) != 0.0) x[i].axpy(h_ * tab_.a(i, l), dbv);
        const std::vector<FourierState> col = apply_resolvent(x);
        for (int i = 0; i < s; ++i) jac.block(i * d, l * d + q, d, 1) -= rc.to_real(col[i]);
      }
    }
    const Eigen::VectorXd dx = jac.partialPivLu().solve(r);
    for (int i = 0; i < s; ++i) w[i] = rc.from_real(rc.to_real(w[i]) - dx.segment(i * d, d));
    res = residual(w, r);
    if (!std::isfinite(res)) break;
  }
  if (res <= target) return {std::move(w), cfg.max_iter, res};
  throw ConvergenceError("stage Newton iteration did not converge", res, cfg.max_iter);
}

FourierState StepMap::update(const FourierState& u_in, const std::vector<FourierState>& stages) const {
  const FourierState u = project(u_in, m_);
  const int K = model_.max_mode();
  const int s = tab_.s;
  const int c = model_.components();
  std::vector<FourierState> bw;
  bw.reserve(s);
  for (int l = 0; l < s; ++l) bw.push_back(model_.apply_B(stages[l], m_));
  const std::vector<FourierState> mb = apply_resolvent(bw);
  FourierState out = u.zeros_like();
  Eigen::VectorXcd v(c);
  for (int k = -K; k <= K; ++k) {
    const auto& sk = stability_[k + K];
    if (sk.size() == 0) continue;
    for (int j = 0; j < c; ++j) v[j] = u.at(j, k);
    const Eigen::VectorXcd y = sk * v;
    for (int j = 0; j < c; ++j) out.at(j, k) = y[j];
  }
  for (int i = 0; i < s; ++i)
    if (tab_.b[i] != 0.0) out.axpy(h_ * tab_.b[i], mb[i]);
  out.enforce_real_symmetry();
  return out;
}

FourierState StepMap::step(const FourierState& u, const StageSolveConfig& cfg) const {
  const StageSolution sol = solve_stages(u, cfg);
  return update(u, sol.stages);
}

StageSolution solve_stages(const PdeModel& model, const ButcherTableau& tab, const FourierState& u,
                           double h, Cutoff m, const StageSolveConfig& cfg) {
  return StepMap(model, tab, h, m).solve_stages(u, cfg);
}

FourierState step(const PdeModel& model, const ButcherTableau& tab, const FourierState& u, double h,
                  Cutoff m, const StageSolveConfig& cfg) {
  return StepMap(model, tab, h, m).step(u, cfg);
}

// ---------------------------------------------------------------------------
// Diagnostics

double symplecticity_residual(const Eigen::MatrixXd& jac, const Eigen::MatrixXd& omega) {
  return (jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff();
}

double symplecticity_residual(const PdeModel& model, const ButcherTableau& tab,
                              const FourierState& u_in, double h, Cutoff m) {
  if (h == 0.0) return 0.0;
  const StepMap map(model, tab, h, m);
  const RealCoordinates rc(model, m);
  const int d = rc.dim();
  const FourierState u = project(u_in, m);
  const Eigen::VectorXd x0 = rc.to_real(u);
  StageSolveConfig cfg;
  cfg.tol = 1e-15;
  cfg.max_iter = 1000;
  auto psi = [&](const Eigen::VectorXd& x) {
    const FourierState y = rc.from_real(x);
    StageSolution sol;
    try {
      sol = map.solve_stages(y, cfg);
    } catch (const ConvergenceError&) {
      // Residual floor of the fixed point reached; fall back to the last
      // sweep at a slightly looser tolerance.
      StageSolveConfig loose = cfg;
      loose.tol = 1e-13;
      sol = map.solve_stages(y, loose);
    }
    return Eigen::VectorXd(rc.to_real(map.update(y, sol.stages)));
  };
  const double eps = 1e-3 * (1.0 + x0.cwiseAbs().maxCoeff());
  Eigen::MatrixXd jac(d, d);
  for (int j = 0; j < d; ++j) {
    auto at = [&](double sft) {
      Eigen::VectorXd x = x0;
      x[j] += sft;
      return psi(x);
    };
    jac.col(j) = (-at(2 * eps) + 8 * at(eps) - 8 * at(-eps) + at(-2 * eps)) / (12 * eps);
  }
  return symplecticity_residual(jac, rc.omega(model));
}

LinearOperatorBounds linear_operator_bounds(const PdeModel& model, const ButcherTableau& tab,
                                            double h, Cutoff m) {
  const StepMap map(model, tab, h, m);
  const int K = model.max_mode();
  const int s = tab.s;
  const int c = model.components();
  const GevreyIndex plain{0.0, 0.0, model.q()};
  LinearOperatorBounds out{0.0, 0.0, 0.0};
  for (int k = -K; k <= K; ++k) {
    if (!m.admits(model.space().eigenvalue(k))) continue;
    Eigen::VectorXd dw(c);
    for (int j = 0; j < c; ++j) dw[j] = std::sqrt(mode_weight(model.space(), j, k, plain));
    Eigen::VectorXd ds(s * c);
    for (int i = 0; i < s; ++i) ds.segment(i * c, c) = dw;
    const Eigen::MatrixXcd dstack = ds.cast<cd>().asDiagonal();
    const Eigen::MatrixXcd dinv = ds.cwiseInverse().cast<cd>().asDiagonal();
    const Eigen::MatrixXcd& mk = map.resolvent(k);
    const Eigen::MatrixXcd hak = h * kron(tab.a, model.a_block(k)) * mk;
    auto norm2 = [](const Eigen::MatrixXcd& x) {
      return Eigen::JacobiSVD<Eigen::MatrixXcd>(x).singularValues()[0];
    };
    out.lambda = std::max(out.lambda, norm2(dstack * mk * dinv));
    out.one_plus_lambda = std::max(out.one_plus_lambda, norm2(dstack * hak * dinv));
    const Eigen::MatrixXcd dc = dw.cast<cd>().asDiagonal();
    const Eigen::MatrixXcd dci = dw.cwiseInverse().cast<cd>().asDiagonal();
    out.c_s = std::max(out.c_s, norm2(dc * map.stability(k) * dci));
  }
  // h = 0: ‖hαA(I − hαA)⁻¹‖ = 0 ≤ 1 + Λ; report the bound value.
  if (h == 0.0) out.one_plus_lambda = 1.0;
  return out;
}

}  // namespace hbea
