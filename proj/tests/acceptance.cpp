// Acceptance checks 1–14. One PASS/FAIL line per criterion; `--criterion N`
// runs a single one. Exit status is nonzero when any selected check fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hbea/bea.hpp"
#include "hbea/errors.hpp"
#include "hbea/harness/config.hpp"
#include "hbea/harness/csv.hpp"
#include "hbea/harness/experiments.hpp"
#include "hbea/harness/fit.hpp"
#include "hbea/harness/initial_condition.hpp"
#include "hbea/models.hpp"
#include "hbea/rk.hpp"
#include "oracles.hpp"

using namespace hbea;
using namespace hbea::harness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool within(double got, double want, double tol) { return std::abs(got - want) <= tol; }

PdeModel nls_model(int K, double lambda = 1.0) {
  ModelParams p;
  p.kind = ModelKind::nls;
  p.max_mode = K;
  p.lambda = lambda;
  return PdeModel(p);
}

PdeModel wave_model(int K, std::vector<double> coeffs) {
  ModelParams p;
  p.kind = ModelKind::wave;
  p.max_mode = K;
  p.potential.coefficients = std::move(coeffs);
  return PdeModel(p);
}

PdeModel sine_gordon_model(int K) {
  ModelParams p;
  p.kind = ModelKind::wave;
  p.max_mode = K;
  p.potential.kind = WavePotential::Kind::sine_gordon;
  return PdeModel(p);
}

FourierState gevrey_state(const PdeModel& m, std::uint64_t seed, double tau = 1.0,
                          double amplitude = 0.5) {
  InitialConditionSpec s;
  s.tau = tau;
  s.amplitude = amplitude;
  s.seed = seed;
  return make_initial_state(m, s);
}

// The sweep shared by criteria 3 and 4.
ExperimentConfig nls_sweep(const std::string& tableau) {
  ExperimentConfig c = parse_config(R"(
model: {name: nls, band: 16}
method: {stage_tol: 1.0e-14}
run:
  h_range: {start: 0.1, factor: 0.5, count: 5}
  T: 1.0
  sample_every: 1000000
  initial: {kind: gevrey_decay, tau: 2.0, ell: 0.0, amplitude: 1.0, seed: 3}
)");
  c.method.tableau = tableau;
  c.bea.n = {tableau_by_id(tableau).order + 2};
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------

Outcome c1_tableaux() {
  double worst_symp = 0, min_det = 1e300, worst_s = 0;
  for (int s = 1; s <= 3; ++s) {
    const ButcherTableau t = gauss_legendre(s);
    worst_symp = std::max(worst_symp, t.symplecticity_residual());
    min_det = std::min(min_det, std::abs(t.det_a()));
    for (int i = -4000; i <= 4000; ++i) {
      const double y = std::copysign(std::pow(10.0, std::abs(i) / 1000.0) - 1.0, i);
      worst_s = std::max(worst_s, std::abs(stability_function(t, cd(0, y))));
    }
  }
  return {worst_symp < 1e-13 && min_det > 1e-13 && worst_s <= 1 + 1e-12,
          "max symplecticity residual " + fmt(worst_symp) + ", min |det a| " + fmt(min_det) +
              ", max |S(iy)| " + fmt(worst_s)};
}

Outcome c2_linear_exactness() {
  ExperimentConfig c = parse_config(R"(
model: {name: nls, band: 16, lambda: 0.0}
method: {tableau: midpoint, stage_tol: 1.0e-14}
run:
  h: [0.1]
  T: 10.0
  sample_every: 10
  initial: {kind: gevrey_decay, tau: 1.0, amplitude: 0.5, seed: 11}
)");
  const DriftResult r = drift_study(c);
  const double H0 = r.rows.front().H;
  const double rel = r.max_H_drift.front() / std::abs(H0);
  return {!r.failed && rel <= 1e-10, "relative H drift " + fmt(rel) + " over T=10"};
}

Outcome c3_order() {
  bool ok = true;
  std::string d;
  for (const auto& [tab, want, tol] :
       {std::tuple{"midpoint", 2.0, 0.2}, std::tuple{"gauss2", 4.0, 0.3}}) {
    const ConvergenceResult r = convergence_study(nls_sweep(tab));
    ok = ok && !r.failed && within(r.fit.slope, want, tol);
    d += std::string(d.empty() ? "" : ", ") + tab + " slope " + fmt(r.fit.slope);
  }
  return {ok, d};
}

Outcome c4_energy_drift() {
  bool ok = true;
  std::string d;
  for (const auto& [tab, p] : {std::pair{"midpoint", 2.0}, std::pair{"gauss2", 4.0}}) {
    const DriftResult r = drift_study(nls_sweep(tab));
    const LinearFit f = fit_loglog(r.h, r.max_H_drift);
    ok = ok && !r.failed && within(f.slope, p, 0.3);
    d += std::string(d.empty() ? "" : ", ") + tab + " H-drift slope " + fmt(f.slope);
  }
  return {ok, d};
}

ExperimentConfig bea_config_full(const std::string& tableau, std::vector<double> hs,
                                 std::vector<int> ns) {
  ExperimentConfig c = parse_config(R"(
model: {name: nls, band: 8}
method: {stage_tol: 1.0e-15}
run:
  initial: {kind: gevrey_decay, tau: 1.0, amplitude: 0.5, seed: 7}
bea: {policy: explicit, gradient_dirs: 1}
)");
  c.method.tableau = tableau;
  c.run.h = std::move(hs);
  c.bea.n = std::move(ns);
  c.validate();
  return c;
}

Outcome c5_closeness() {
  bool ok = true;
  std::string d;
  for (const auto& [tab, p] : {std::pair{"midpoint", 2}, std::pair{"gauss2", 4}}) {
    const BeaResult r =
        bea_verify(bea_config_full(tab, {0.2, 0.14, 0.1, 0.07, 0.05}, {1}));
    ok = ok && !r.failed && within(r.closeness_fit.slope, p, 0.3);
    d += std::string(d.empty() ? "" : ", ") + tab + " |H~-H| slope " +
         fmt(r.closeness_fit.slope) + " (n=" + std::to_string(p + 2) + ")";
  }
  return {ok, d};
}

Outcome c6_embedding() {
  const BeaResult r =
      bea_verify(bea_config_full("midpoint", {0.02, 0.014, 0.01, 0.007, 0.005}, {1, 3, 5}));
  bool ok = !r.failed;
  std::string d = "midpoint K=8:";
  for (const auto& [n, f] : r.embedding_fits) {
    ok = ok && within(f.slope, n + 1, 0.3);
    d += " n=" + std::to_string(n) + " slope " + fmt(f.slope) + " (want " +
         std::to_string(n + 1) + ")";
  }
  return {ok, d};
}

Outcome c7_drift_hierarchy() {
  // Small band so that h·k² stays well below 1 over the sweep.
  const PdeModel model = nls_model(4);
  const FourierState u = gevrey_state(model, 7);
  const StageSolveConfig cfg{.tol = 1e-15, .max_iter = 500};
  bool ok = true;
  std::string d;
  for (const auto& [tab_id, h0] : {std::pair{"midpoint", 0.05}, std::pair{"gauss2", 0.1}}) {
    const ButcherTableau tab = tableau_by_id(tab_id);
    const int n = tab.order + 2;
    const ModifiedHamiltonian Ht(ModifiedField(model, tab, n, Cutoff::full()));
    std::vector<double> hs, dH, dHt;
    for (int i = 0; i < 5; ++i) {
      const double h = h0 * std::pow(0.5, 0.5 * i);
      const FourierState v = step(model, tab, u, h, Cutoff::full(), cfg);
      hs.push_back(h);
      dH.push_back(std::abs(model.hamiltonian(v) - model.hamiltonian(u)));
      dHt.push_back(std::abs(Ht.value(v, h) - Ht.value(u, h)));
    }
    const LinearFit fh = fit_loglog(hs, dH), ft = fit_loglog(hs, dHt);
    const bool here = ft.slope >= n + 1 - 0.3 && ft.slope - fh.slope >= (n - tab.order) - 0.5;
    ok = ok && here;
    d += std::string(d.empty() ? "" : ", ") + tab_id + " n=" + std::to_string(n) +
         ": per-step H~ slope " + fmt(ft.slope) + ", H slope " + fmt(fh.slope);
  }
  return {ok, d};
}

Outcome c8_small_oracle() {
  double worst = 0;
  // NLS on the k = 1 mode.
  {
    const double lambda = 1.3;
    const PdeModel m = nls_model(1, lambda);
    FourierState u = m.zero_state();
    const cd c(0.7, -0.4);
    u.at(0, 1) = c;
    const oracle::cvec b =
        oracle::modified_coefficient(oracle::nls_one_mode(lambda), {c.real(), c.imag()}, 3, 1);
    const cd want(b[0].real(), b[1].real());
    const FourierState f3 =
        modified_field_coefficient(m, gauss_legendre(1), 3, u, Cutoff(1)).value;
    worst = std::max(worst, std::abs(f3.at(0, 1) - want) / std::abs(want));
    const oracle::Field F = oracle::nls_one_mode(lambda);
    auto pairing = [](const oracle::cvec& p, const oracle::cvec& q) {
      return (p[0] * q[0] + p[1] * q[1]).real();
    };
    auto j_inv = [](const oracle::cvec& p) { return oracle::cvec{-p[1], p[0]}; };
    const double H3 = oracle::line_integral(
        [&](const oracle::cvec& p) { return oracle::modified_coefficient(F, p, 3, 1); },
        {c.real(), c.imag()}, pairing, j_inv);
    const ModifiedHamiltonian ham(ModifiedField(m, gauss_legendre(1), 3, Cutoff(1)));
    worst = std::max(worst, std::abs(ham.coefficients(u)[2] - H3) / std::abs(H3));
  }
  // Wave with V = c2 u² + c4 u⁴ on the ±1 pair.
  {
    const double c2 = 0.5, c4 = 0.3;
    const PdeModel m = wave_model(1, {0, 0, c2, 0, c4});
    FourierState u = m.zero_state();
    const cd a(0.6, 0.2), b(-0.3, 0.45);
    u.at(0, 1) = a;
    u.at(0, -1) = std::conj(a);
    u.at(1, 1) = b;
    u.at(1, -1) = std::conj(b);
    const oracle::Field F = oracle::wave_one_mode(c2, c4);
    const oracle::cvec y{a.real(), a.imag(), b.real(), b.imag()};
    const oracle::cvec f = oracle::modified_coefficient(F, y, 3, 1);
    const cd wu(f[0].real(), f[1].real()), wv(f[2].real(), f[3].real());
    const FourierState f3 =
        modified_field_coefficient(m, gauss_legendre(1), 3, u, Cutoff(1)).value;
    const double scale = std::hypot(std::abs(wu), std::abs(wv));
    worst = std::max(worst, std::hypot(std::abs(f3.at(0, 1) - wu), std::abs(f3.at(1, 1) - wv)) /
                                scale);
    auto pairing = [](const oracle::cvec& p, const oracle::cvec& q) {
      double s = 0;
      for (int i = 0; i < 4; ++i) s += 2 * (p[i] * q[i]).real();
      return s;
    };
    auto j_inv = [](const oracle::cvec& p) { return oracle::cvec{-p[2], -p[3], p[0], p[1]}; };
    const double H3 = oracle::line_integral(
        [&](const oracle::cvec& p) { return oracle::modified_coefficient(F, p, 3, 1); }, y,
        pairing, j_inv);
    const ModifiedHamiltonian ham(ModifiedField(m, gauss_legendre(1), 3, Cutoff(1)));
    worst = std::max(worst, std::abs(ham.coefficients(u)[2] - H3) / std::abs(H3));
  }
  return {worst <= 1e-5, "worst relative deviation of f3/H3 from brute force " + fmt(worst)};
}

Outcome c9_projection_decay() {
  bool ok = true;
  std::string d;
  for (const char* model : {"wave", "nls"}) {
    ExperimentConfig c = parse_config(R"(
model: {band: 8, coefficients: [0, 0, 0.5, 0, 0.25]}
method: {tableau: midpoint, stage_tol: 1.0e-15}
run:
  initial: {kind: gevrey_decay, tau: 0.4, ell: 2.0, amplitude: 0.5, seed: 1}
projscan: {reference_band: 32, h: 0.01}
)");
    c.model.name = model;
    if (c.model.name == "nls") c.model.coefficients.clear();
    const ProjscanResult r = projection_scan(c);
    const double tau = c.run.initial.tau;
    const bool here = !r.failed && r.fit.slope < 0 && std::abs(r.fit.slope + tau) <= 0.25 * tau;
    ok = ok && here;
    d += std::string(d.empty() ? "" : ", ") + model + " slope " + fmt(r.fit.slope) + " (r2 " +
         fmt(r.fit.r2) + ")";
  }
  return {ok, d + " vs -tau = -0.4"};
}

Outcome c10_operator_bound() {
  double worst = 0;  // measured / bound
  for (const PdeModel& m : {nls_model(32), wave_model(32, {})}) {
    const double q = m.space().q;
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
      const double tau = 0.5 * uniform01(rng);
      const double sigma = tau + 0.1 + uniform01(rng);
      const double decay = sigma * (0.3 + uniform01(rng));
      const FourierState u = random_state(m.grid_ptr(), m.space(), Cutoff::full(), rng, 1.0, decay);
      FourierState a = u;
      for (int p = 1; p <= 3; ++p) {
        a = m.apply_A(a);
        const double ratio = gevrey_norm(a, {tau, 0.0, q}) / gevrey_norm(u, {sigma, 0.0, q});
        worst = std::max(worst, ratio / operator_power_bound(sigma, tau, p, q));
      }
    }
  }
  return {worst <= 1.0, "max measured/bound ratio " + fmt(worst)};
}

Outcome c11_symplecticity() {
  double worst = 0;
  for (const PdeModel& m : {nls_model(3), wave_model(3, {0, 0, 0.5, 0, 0.25}), sine_gordon_model(3)}) {
    const FourierState u = gevrey_state(m, 5);
    for (int s = 1; s <= 2; ++s) {
      for (double h : {0.01, 0.1}) {
        worst = std::max(worst, symplecticity_residual(m, gauss_legendre(s), u, h, Cutoff::full()));
      }
    }
  }
  return {worst <= 1e-6, "max residual " + fmt(worst)};
}

Outcome c12_expfit() {
  ExperimentConfig c = parse_config(R"(
model: {name: nls, band: 4, lambda: 1.0}
method: {tableau: midpoint, stage_tol: 1.0e-15}
run:
  h: [0.2, 0.14, 0.1, 0.07, 0.05, 0.035, 0.025]
  initial: {kind: gevrey_decay, tau: 1.0, amplitude: 0.5, seed: 7}
bea: {policy: paper_coupled, tau: 1.0, chi: 350, n_max: 6, gradient_dirs: 1}
)");
  const BeaResult r = bea_verify(c);
  int in_range = 0;
  for (const auto& row : r.expfit) in_range += row.in_range ? 1 : 0;
  const bool ok = !r.failed && in_range >= 3 && r.exp_fit.slope < 0 && r.exp_fit.r2 >= 0.9;
  return {ok, "slope " + fmt(r.exp_fit.slope) + ", r2 " + fmt(r.exp_fit.r2) + " over " +
                  std::to_string(in_range) + " in-range steps"};
}

Outcome c13_gradient() {
  double worst = 0;
  for (const PdeModel& m : {nls_model(4), sine_gordon_model(4)}) {
    const FourierState u = gevrey_state(m, 9);
    for (int s = 1; s <= 2; ++s) {
      for (int n = 1; n <= 4; ++n) {
        worst = std::max(worst, gradient_consistency(m, gauss_legendre(s),
                                                     TruncationPolicy::explicit_policy(n), u, 0.1,
                                                     3, 1));
      }
    }
  }
  return {worst <= 1e-5, "max residual " + fmt(worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c14_determinism() {
  const fs::path base = fs::temp_directory_path() / "hbea_acceptance_14";
  fs::remove_all(base);
  fs::create_directories(base);
  {
    std::ofstream cfg(base / "drift.yaml");
    cfg << "model: {name: nls, band: 8}\n"
           "method: {tableau: midpoint, stage_tol: 1.0e-14}\n"
           "run:\n"
           "  h: [0.1, 0.05]\n"
           "  T: 0.5\n"
           "  sample_every: 2\n"
           "  initial: {kind: gevrey_decay, tau: 1.0, amplitude: 0.5, seed: 7}\n"
           "bea: {policy: explicit, n: [4]}\n";
    std::ofstream bea(base / "bea.yaml");
    bea << "model: {name: nls, band: 4}\n"
           "method: {tableau: midpoint, stage_tol: 1.0e-15}\n"
           "run:\n"
           "  h: [0.1, 0.05, 0.025]\n"
           "  initial: {kind: gevrey_decay, tau: 1.0, amplitude: 0.5, seed: 7}\n"
           "bea: {policy: paper_coupled, chi: 350, gradient_dirs: 2}\n";
  }
  int files = 0;
  bool same = true;
  for (const char* study : {"drift", "bea"}) {
    const std::vector<std::pair<std::string, std::string>> runs{
        {"a", "--threads 1"}, {"b", "--threads 1"}, {"c", "--threads 3"}};
    for (const auto& [dir, flags] : runs) {
      const std::string cmd = std::string(HBEA_CLI_PATH) + " " + study + " --config " +
                              (base / (std::string(study) + ".yaml")).string() + " --out " +
                              (base / study / dir).string() + " " + flags + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
    }
    for (const auto& e : fs::directory_iterator(base / study / "a")) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      const std::string ref = slurp(e.path());
      for (const char* other : {"b", "c"}) {
        same = same && ref == slurp(base / study / other / e.path().filename());
      }
    }
  }
  fs::remove_all(base);
  return {same && files > 0, std::to_string(files) + " CSV files compared over 3 runs" +
                                 (same ? ", byte-identical" : ", DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run one criterion (1-14)")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::function<Outcome()>> checks{
      {1, c1_tableaux},        {2, c2_linear_exactness}, {3, c3_order},
      {4, c4_energy_drift},    {5, c5_closeness},        {6, c6_embedding},
      {7, c7_drift_hierarchy}, {8, c8_small_oracle},     {9, c9_projection_decay},
      {10, c10_operator_bound}, {11, c11_symplecticity}, {12, c12_expfit},
      {13, c13_gradient},      {14, c14_determinism}};

  bool all = true;
  for (const auto& [id, fn] : checks) {
    if (only != 0 && id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << " ["
              << fmt(secs) << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
