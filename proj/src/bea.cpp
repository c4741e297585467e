#include "hbea/bea.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hbea/errors.hpp"

namespace hbea {

// ---------------------------------------------------------------------------
// Policy

std::string to_string(PolicyMode m) {
  return m == PolicyMode::explicit_nm ? "explicit" : "paper_coupled";
}

PolicyMode policy_mode_from_string(const std::string& s) {
  if (s == "explicit") return PolicyMode::explicit_nm;
  if (s == "paper_coupled" || s == "coupled") return PolicyMode::paper_coupled;
  throw InvalidArgument("unknown truncation policy '" + s + "'");
}

double measure_c_F(const PdeModel& model, const FourierState& u) {
  return gevrey_norm(u, GevreyIndex{0.0, 1.0, model.q()}) + y_norm(model.apply_B(u));
}

ResolvedPolicy resolve_policy(const TruncationPolicy& policy, double h, const ButcherTableau& tab,
                              const PdeModel& model, const FourierState* sample) {
  if (!(h > 0.0)) throw InvalidArgument("resolve_policy: h must be > 0");
  ResolvedPolicy r;
  if (policy.mode == PolicyMode::explicit_nm) {
    if (policy.n < 1) throw InvalidArgument("resolve_policy: n must be >= 1");
    r.n = policy.n;
    r.m = policy.m;
    return r;
  }
  if (!(policy.tau > 0.0)) throw InvalidArgument("resolve_policy: tau must be > 0");
  const double q = policy.q > 0.0 ? policy.q : model.q();
  double chi = policy.chi;
  if (!(chi > 0.0)) {
    double c_f = policy.c_F;
    if (!(c_f > 0.0)) {
      if (sample == nullptr) throw InvalidArgument("resolve_policy: c_F needs a sample state");
      c_f = measure_c_F(model, *sample);
    }
    if (!(c_f > 0.0)) throw InvalidArgument("resolve_policy: c_F must be > 0");
    chi = policy.delta / (2.0 * std::exp(1.0) * tab.eta * c_f);
  }
  r.chi = chi;

  const double m_real = std::pow(chi / (policy.tau * h), q / (1.0 + q));
  const double band_max = model.max_eigenvalue();
  double m = std::ceil(m_real - 1e-9);
  if (m < 1.0) {
    m = 1.0;
    r.m_clamped = true;
  }
  if (m > band_max) {
    m = std::max(1.0, band_max);
    r.m_clamped = true;
  }
  r.m = Cutoff(static_cast<std::int64_t>(m));

  const double n_real =
      std::pow(policy.tau, q / (1.0 + q)) * std::pow(chi / h, 1.0 / (1.0 + q)) / 4.0;
  int n = static_cast<int>(std::floor(n_real + 1e-9));
  const int lo = tab.order + 1;
  const int hi = std::max(policy.n_max, lo);
  if (n < lo) {
    n = lo;
    r.n_clamped = true;
  }
  if (n > hi) {
    n = hi;
    r.n_clamped = true;
  }
  r.n = n;
  return r;
}

std::string to_string(FieldEngine e) {
  return e == FieldEngine::iterate_log ? "iterate_log" : "lie_recursion";
}

FieldEngine field_engine_from_string(const std::string& s) {
  if (s == "iterate_log") return FieldEngine::iterate_log;
  if (s == "lie_recursion") return FieldEngine::lie_recursion;
  throw InvalidArgument("unknown field engine '" + s + "'");
}

// ---------------------------------------------------------------------------
// Engines

namespace {

// Jets of Ψ^i(U), i = 1…count, each to the given order.
std::vector<HJet> iterate_jets(const PdeModel& model, const ButcherTableau& tab,
                               const FourierState& u, Cutoff m, int order, int count, int cap) {
  std::vector<HJet> out;
  out.reserve(count);
  HJet z = HJet::constant(u, order, m);
  for (int i = 1; i <= count; ++i) {
    z = expand_step_map(model, tab, z, m, cap);
    out.push_back(z);
  }
  return out;
}

// d/dx L_i(0) for the Lagrange basis on the nodes 0, 1, …, last.
std::vector<double> derivative_weights(int last) {
  std::vector<double> w(last + 1, 0.0);
  for (int i = 0; i <= last; ++i) {
    double sum = 0.0;
    for (int skip = 0; skip <= last; ++skip) {
      if (skip == i) continue;
      double prod = 1.0 / (i - skip);
      for (int r = 0; r <= last; ++r) {
        if (r == i || r == skip) continue;
        prod *= (0.0 - r) / (i - r);
      }
      sum += prod;
    }
    w[i] = sum;
  }
  return w;
}

// Σ_{i=1}^{last} w_i Y^{(i)}_j; node 0 contributes nothing for j ≥ 1.
FourierState interpolate_coefficient(const std::vector<HJet>& ys, int j, int last) {
  const std::vector<double> w = derivative_weights(last);
  FourierState f = ys.front()[j].zeros_like();
  for (int i = 1; i <= last; ++i) f.axpy(w[i], ys[i - 1][j]);
  return f;
}

std::string state_key(const FourierState& y) {
  const auto d = y.data();
  return std::string(reinterpret_cast<const char*>(d.data()), d.size() * sizeof(cd));
}

class LieRecursion {
 public:
  LieRecursion(const PdeModel& model, const ButcherTableau& tab, Cutoff m,
               const ModifiedFieldOptions& opts)
      : model_(model), tab_(tab), m_(m), opts_(opts) {}

  FourierState f(int j, const FourierState& y) {
    if (j == 1) return model_.apply_F(y, m_);
    if (opts_.prune && j <= tab_.order) return project(y, m_).zeros_like();
    const auto key = std::make_pair(j, state_key(y));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    FourierState r = g(j, y);
    std::vector<int> ks;
    for (int i = 2; i <= j; ++i) {
      double inv_fact = 1.0;
      for (int t = 2; t <= i; ++t) inv_fact /= t;
      ks.assign(i, 1);
      // Enumerate compositions (k_1, …, k_i) of j.
      for_each_composition(j, i, ks, 0, [&](const std::vector<int>& c) {
        if (opts_.prune) {
          for (int k : c)
            if (k >= 2 && k <= tab_.order) return;
        }
        r.axpy(-inv_fact, nested(c, 0, y));
      });
    }
    memo_.emplace(key, r);
    return r;
  }

 private:
  template <class Fn>
  void for_each_composition(int remaining, int parts, std::vector<int>& c, int pos, Fn&& fn) {
    if (pos == parts - 1) {
      c[pos] = remaining;
      fn(c);
      return;
    }
    for (int k = 1; k <= remaining - (parts - pos - 1); ++k) {
      c[pos] = k;
      for_each_composition(remaining - k, parts, c, pos + 1, fn);
    }
  }

  // D_{c_pos} ⋯ D_{c_{i−2}} f^{c_{i−1}} at y; the innermost derivative is
  // taken first.
  FourierState nested(const std::vector<int>& c, std::size_t pos, const FourierState& y) {
    if (pos + 1 == c.size()) return f(c.back(), y);
    const FourierState dir = f(c[pos], y);
    return directional_derivative(
        [&](const FourierState& x) { return nested(c, pos + 1, x); }, y, dir, opts_.eps0);
  }

  FourierState g(int j, const FourierState& y) {
    const auto key = state_key(y);
    auto it = jets_.find(key);
    if (it == jets_.end() || it->second.order() < j) {
      HJet jet = expand_step_map(model_, tab_, y, m_, j, opts_.order_cap);
      it = jets_.insert_or_assign(key, std::move(jet)).first;
    }
    return it->second[j];
  }

  const PdeModel& model_;
  const ButcherTableau& tab_;
  Cutoff m_;
  ModifiedFieldOptions opts_;
  std::map<std::pair<int, std::string>, FourierState> memo_;
  std::map<std::string, HJet> jets_;
};

}  // namespace

// ---------------------------------------------------------------------------
// ModifiedField

ModifiedField::ModifiedField(PdeModel model, ButcherTableau tab, int n, Cutoff m,
                             ModifiedFieldOptions opts)
    : model_(std::move(model)), tab_(std::move(tab)), n_(n), m_(m), opts_(opts) {
  if (n < 1) throw InvalidArgument("ModifiedField: order must be >= 1");
  if (n > opts_.order_cap) throw InvalidArgument("ModifiedField: order cap exceeded");
}

std::vector<FourierState> ModifiedField::coefficients(const FourierState& u_in) const {
  const FourierState u = project(u_in, m_);
  std::vector<FourierState> f(n_, u.zeros_like());
  f[0] = model_.apply_F(u, m_);
  if (n_ == 1 || (opts_.prune && n_ <= tab_.order)) return f;
  if (opts_.engine == FieldEngine::iterate_log) {
    const std::vector<HJet> ys = iterate_jets(model_, tab_, u, m_, n_, n_, opts_.order_cap);
    for (int j = 2; j <= n_; ++j) {
      if (opts_.prune && j <= tab_.order) continue;
      f[j - 1] = interpolate_coefficient(ys, j, j);
    }
  } else {
    LieRecursion rec(model_, tab_, m_, opts_);
    for (int j = 2; j <= n_; ++j) f[j - 1] = rec.f(j, u);
  }
  return f;
}

FourierState ModifiedField::correction(const std::vector<FourierState>& f, double h) const {
  FourierState c = f.front().zeros_like();
  double hj = std::pow(h, tab_.order);
  for (int j = tab_.order; j <= n_ - 1; ++j) {
    c.axpy(hj, f[j]);
    hj *= h;
  }
  return c;
}

FourierState ModifiedField::evaluate(const FourierState& u, double h) const {
  const std::vector<FourierState> f = coefficients(u);
  FourierState r = f.front();
  if (n_ > tab_.order) r += correction(f, h);
  return r;
}

FieldCoefficient modified_field_coefficient(const PdeModel& model, const ButcherTableau& tab,
                                            int j, const FourierState& u_in, Cutoff m,
                                            const ModifiedFieldOptions& opts) {
  if (j < 1) throw InvalidArgument("modified_field_coefficient: j must be >= 1");
  if (j > opts.order_cap) throw InvalidArgument("modified_field_coefficient: order cap exceeded");
  const FourierState u = project(u_in, m);
  FieldCoefficient out;
  if (j == 1) {
    out.value = model.apply_F(u, m);
    return out;
  }
  FourierState alt;
  if (opts.engine == FieldEngine::iterate_log) {
    const std::vector<HJet> ys =
        iterate_jets(model, tab, u, m, j, j + 1, std::max(opts.order_cap, j + 1));
    out.value = interpolate_coefficient(ys, j, j);
    alt = interpolate_coefficient(ys, j, j + 1);
  } else {
    ModifiedFieldOptions o = opts;
    o.prune = false;
    LieRecursion rec(model, tab, m, o);
    out.value = rec.f(j, u);
    o.eps0 = 2.0 * opts.eps0;
    LieRecursion rec2(model, tab, m, o);
    alt = rec2.f(j, u);
  }
  out.noise = y_norm(out.value - alt);
  out.noisy = out.noise > 0.1 * y_norm(out.value);
  return out;
}

FourierState modified_flow(const ModifiedField& field, const FourierState& u, double h,
                           const FlowTolerance& tol) {
  if (h < 0.0) throw InvalidArgument("modified_flow: h must be >= 0");
  const FourierState u0 = project(u, field.cutoff());
  return integrate_flow([&](const FourierState& x) { return field.evaluate(x, h); }, u0, h, tol);
}

FourierState modified_flow(const PdeModel& model, const ButcherTableau& tab,
                           const TruncationPolicy& policy, const FourierState& u, double h,
                           const ModifiedFieldOptions& opts) {
  const ResolvedPolicy r = resolve_policy(policy, h, tab, model, &u);
  return modified_flow(ModifiedField(model, tab, r.n, r.m, opts), u, h);
}

// ---------------------------------------------------------------------------
// Modified Hamiltonian

void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss_legendre_rule: n must be >= 1");
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (double z : pos) {
    if (z != 0.0) x.push_back(-z);
  }
  for (double z : pos) x.push_back(z);
  std::sort(x.begin(), x.end());
  nodes.clear();
  weights.clear();
  for (double z : x) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes.push_back(0.5 * (z + 1.0));
    weights.push_back(0.5 * w);
  }
}

ModifiedHamiltonian::ModifiedHamiltonian(ModifiedField field, std::optional<FourierState> anchor,
                                         int nodes)
    : field_(std::move(field)), nodes_(nodes) {
  if (nodes < 1) throw InvalidArgument("ModifiedHamiltonian: nodes must be >= 1");
  if (anchor) {
    field_.model().require_compatible(*anchor);
    anchor_ = project(*anchor, field_.cutoff());
  } else {
    if (field_.model().kind() == ModelKind::nonlocal_nls) {
      throw InvalidArgument("ModifiedHamiltonian: nonlocal_nls needs an explicit anchor");
    }
    anchor_ = field_.model().zero_state();
  }
}

double ModifiedHamiltonian::value_with(const FourierState& u, double h, int nodes) const {
  const PdeModel& model = field_.model();
  const FourierState p = project(u, field_.cutoff());
  const double base = model.hamiltonian(p);
  if (field_.order() <= field_.tableau().order) return base;
  const FourierState d = p - anchor_;
  std::vector<double> t, w;
  gauss_legendre_rule(nodes, t, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    FourierState y = anchor_;
    y.axpy(t[i], d);
    model.check_domain(y);
    const std::vector<FourierState> f = field_.coefficients(y);
    acc += w[i] * y_inner(d, model.apply_J_inv(field_.correction(f, h)));
  }
  return base + acc;
}

double ModifiedHamiltonian::value(const FourierState& u, double h) const {
  return value_with(u, h, nodes_);
}

ModifiedHamiltonian::Checked ModifiedHamiltonian::value_checked(const FourierState& u,
                                                                double h) const {
  Checked c{};
  c.value = value_with(u, h, nodes_);
  c.value_alt = value_with(u, h, 24);
  c.rel_diff = std::abs(c.value - c.value_alt) / std::max(std::abs(c.value), 1e-300);
  return c;
}

std::vector<double> ModifiedHamiltonian::coefficients(const FourierState& u) const {
  const PdeModel& model = field_.model();
  const int n = field_.order();
  const FourierState p = project(u, field_.cutoff());
  std::vector<double> out(n, 0.0);
  out[0] = model.hamiltonian(p) - model.hamiltonian(anchor_);
  if (n == 1) return out;
  const FourierState d = p - anchor_;
  std::vector<double> t, w;
  gauss_legendre_rule(nodes_, t, w);
  for (std::size_t i = 0; i < t.size(); ++i) {
    FourierState y = anchor_;
    y.axpy(t[i], d);
    model.check_domain(y);
    const std::vector<FourierState> f = field_.coefficients(y);
    for (int j = 2; j <= n; ++j) out[j - 1] += w[i] * y_inner(d, model.apply_J_inv(f[j - 1]));
  }
  return out;
}

double modified_hamiltonian_eval(const PdeModel& model, const ButcherTableau& tab,
                                 const TruncationPolicy& policy, const FourierState& u, double h,
                                 const ModifiedFieldOptions& opts,
                                 std::optional<FourierState> anchor) {
  const ResolvedPolicy r = resolve_policy(policy, h, tab, model, &u);
  const ModifiedHamiltonian ham(ModifiedField(model, tab, r.n, r.m, opts), std::move(anchor));
  return ham.value(u, h);
}

double gradient_consistency(const PdeModel& model, const ButcherTableau& tab,
                            const TruncationPolicy& policy, const FourierState& u_in, double h,
                            int n_dirs, std::uint64_t seed, const ModifiedFieldOptions& opts,
                            std::optional<FourierState> anchor) {
  const ResolvedPolicy r = resolve_policy(policy, h, tab, model, &u_in);
  const ModifiedField field(model, tab, r.n, r.m, opts);
  const ModifiedHamiltonian ham(field, std::move(anchor));
  const FourierState u = project(u_in, r.m);
  const FourierState jf = model.apply_J_inv(field.evaluate(u, h));
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_dirs; ++i) {
    const FourierState w = random_state(model.grid_ptr(), model.space(), r.m, rng);
    const double nw = y_norm(w);
    const double eps = 1e-3 * (1.0 + y_norm(u)) / nw;
    auto at = [&](double s) {
      FourierState x = u;
      x.axpy(s, w);
      return ham.value(x, h);
    };
    const double dh = (at(-2 * eps) - 8 * at(-eps) + 8 * at(eps) - at(2 * eps)) / (12 * eps);
    const double ref = std::max(y_norm(jf) * nw, 1e-300);
    worst = std::max(worst, std::abs(dh - y_inner(jf, w)) / ref);
  }
  return worst;
}

}  // namespace hbea
