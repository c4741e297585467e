#include "hbea/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "hbea/errors.hpp"
#include "hbea/harness/initial_condition.hpp"

namespace hbea::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::mutex g_log_mutex;

void log(const RunOptions& opts, const std::string& msg) {
  if (!opts.verbose) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "[hbea] " << msg << '\n';
}

// Runs fn(0..count-1) on up to `threads` workers. Results must go to
// index-addressed slots so the output order never depends on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Numerical failures become a status string; anything else propagates.
template <class Fn>
std::string guarded(Fn&& fn) {
  try {
    fn();
    return "ok";
  } catch (const ConvergenceError&) {
    return "convergence_failure";
  } catch (const DomainError&) {
    return "domain_error";
  } catch (const PoleError&) {
    return "pole_error";
  }
}

struct Setup {
  PdeModel model;
  ButcherTableau tab;
  StageSolveConfig stage;
  ModifiedFieldOptions field_opts;
  FourierState u0;

  explicit Setup(const ExperimentConfig& cfg)
      : model(make_model(cfg)),
        tab(make_tableau(cfg)),
        stage(make_stage_config(cfg)),
        field_opts(make_field_options(cfg)),
        u0(make_initial_state(model, cfg.run.initial)) {}

  // The line integral for H̃ starts at zero except for the nonlocal model,
  // whose domain excludes it; there the initial state is used.
  std::optional<FourierState> anchor(Cutoff m) const {
    if (model.kind() == ModelKind::nonlocal_nls) return project(u0, m);
    return std::nullopt;
  }
};

std::vector<double> step_sizes(const ExperimentConfig& cfg) {
  std::vector<double> hs = cfg.run.h_values();
  if (hs.empty()) throw ConfigError("run: no step sizes given (run.h or run.h_range)");
  return hs;
}

std::int64_t step_count(double T, double h) {
  return std::max<std::int64_t>(1, std::llround(T / h));
}

double gradient_scale(const PdeModel& model, const FourierState& u, Cutoff m) {
  return y_norm(model.apply_J_inv(model.apply_F(u, m)));
}

}  // namespace

std::int64_t cutoff_label(Cutoff m, const PdeModel& model) {
  if (m.is_full()) return static_cast<std::int64_t>(std::llround(model.max_eigenvalue()));
  return m.value();
}

void add_provenance(CsvTable& table, const ExperimentConfig& cfg, const PdeModel& model) {
  std::vector<std::string> names{"config_hash", "code_version", "tableau", "stage_tol", "max_iter"};
  std::vector<std::string> values{config_hash(cfg), HBEA_VERSION, cfg.method.tableau,
                                   format_double(cfg.method.stage_tol),
                                   std::to_string(cfg.method.max_iter)};
  const auto& hd = table.header();
  const bool has_n = std::find(hd.begin(), hd.end(), "n") != hd.end() ||
                     std::find(hd.begin(), hd.end(), "n_used") != hd.end();
  if (!has_n) {
    const TruncationPolicy p = make_policy(cfg);
    names.push_back("n");
    names.push_back("m");
    if (p.mode == PolicyMode::paper_coupled) {
      values.push_back("coupled");
      values.push_back("coupled");
    } else {
      values.push_back(std::to_string(p.n));
      values.push_back(std::to_string(cutoff_label(p.m, model)));
    }
  }
  table.append_constant_columns(names, values);
}

std::vector<std::string> write_study(const StudyOutput& out, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> paths;
  for (const auto& [name, table] : out.files) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    table.write(path);
    paths.push_back(path);
  }
  return paths;
}

// ---------------------------------------------------------------------------
// integrate

StudyOutput run_integrate(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const Setup s(cfg);
  const TruncationPolicy policy = make_policy(cfg);
  const std::vector<double> hs = step_sizes(cfg);

  struct Row {
    double h, t;
    std::int64_t step;
    double H, norm;
    std::int64_t iterations;
    std::string status;
  };
  std::vector<std::vector<Row>> results(hs.size());
  parallel_for(hs.size(), opts.threads, [&](std::size_t i) {
    const double h = hs[i];
    const ResolvedPolicy r = resolve_policy(policy, h, s.tab, s.model, &s.u0);
    const StepMap map(s.model, s.tab, h, r.m);
    FourierState u = project(s.u0, r.m);
    const std::int64_t N = step_count(cfg.run.T, h);
    auto& rows = results[i];
    rows.push_back({h, 0.0, 0, s.model.hamiltonian(u), y_norm(u), 0, "ok"});
    for (std::int64_t j = 1; j <= N; ++j) {
      int iters = 0;
      const std::string st = guarded([&] {
        const StageSolution sol = map.solve_stages(u, s.stage);
        iters = sol.iterations;
        u = map.update(u, sol.stages);
      });
      if (st != "ok") {
        rows.push_back({h, j * h, j, kNaN, kNaN, iters, st});
        break;
      }
      if (j % cfg.run.sample_every == 0 || j == N) {
        rows.push_back({h, j * h, j, s.model.hamiltonian(u), y_norm(u), iters, "ok"});
      }
    }
    log(opts, "integrate h=" + format_double(h) + " done");
  });

  StudyOutput out;
  CsvTable t({"h", "step", "t", "H", "norm_Y", "stage_iterations", "status"});
  for (const auto& rows : results) {
    for (const auto& r : rows) {
      t.add_row({r.h, r.step, r.t, r.H, r.norm, r.iterations, r.status});
      if (r.status != "ok") out.numerical_failure = true;
    }
  }
  add_provenance(t, cfg, s.model);
  out.files.emplace_back("integrate.csv", std::move(t));
  return out;
}

// ---------------------------------------------------------------------------
// drift

DriftResult drift_study(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const Setup s(cfg);
  const TruncationPolicy policy = make_policy(cfg);
  const std::vector<double> hs = step_sizes(cfg);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  struct Point {
    std::vector<DriftRow> rows;
    double max_H = 0.0, max_Ht = 0.0;
    bool failed = false;
  };
  std::vector<Point> points(hs.size());
  parallel_for(hs.size(), opts.threads, [&](std::size_t i) {
    const double h = hs[i];
    Point& pt = points[i];
    const ResolvedPolicy r = resolve_policy(policy, h, s.tab, s.model, &s.u0);
    const StepMap map(s.model, s.tab, h, r.m);
    const ModifiedHamiltonian ham(ModifiedField(s.model, s.tab, r.n, r.m, s.field_opts),
                                  s.anchor(r.m), cfg.bea.quadrature_nodes);
    const std::int64_t m_label = cutoff_label(r.m, s.model);
    FourierState u = project(s.u0, r.m);
    const double H0 = s.model.hamiltonian(u);
    double Ht0 = kNaN;
    std::string st0 = guarded([&] { Ht0 = ham.value(u, h); });
    // Rounding in H plus the accumulated stage-solver tolerance.
    const double stage_rate =
        h * s.stage.tol * std::max(1.0, y_norm(u)) * gradient_scale(s.model, u, r.m);
    auto floor_at = [&](std::int64_t j) {
      return eps * std::max(std::abs(H0), 1.0) * std::sqrt(static_cast<double>(j + 1)) +
             static_cast<double>(j) * stage_rate;
    };
    pt.rows.push_back({h, 0.0, H0, Ht0, 0.0, 0.0, r.n, m_label, floor_at(0), st0});
    if (st0 != "ok") pt.failed = true;

    const std::int64_t N = step_count(cfg.run.T, h);
    for (std::int64_t j = 1; j <= N; ++j) {
      std::string st = guarded([&] { u = map.step(u, s.stage); });
      if (st != "ok") {
        pt.rows.push_back({h, j * h, kNaN, kNaN, kNaN, kNaN, r.n, m_label, floor_at(j), st});
        pt.failed = true;
        break;
      }
      const double H = s.model.hamiltonian(u);
      pt.max_H = std::max(pt.max_H, std::abs(H - H0));
      if (j % cfg.run.sample_every != 0 && j != N) continue;
      double Ht = kNaN;
      st = guarded([&] { Ht = ham.value(u, h); });
      if (st != "ok") pt.failed = true;
      const double dt = std::abs(Ht - Ht0);
      if (std::isfinite(dt)) pt.max_Ht = std::max(pt.max_Ht, dt);
      pt.rows.push_back({h, j * h, H, Ht, std::abs(H - H0), dt, r.n, m_label, floor_at(j), st});
    }
    log(opts, "drift h=" + format_double(h) + " n=" + std::to_string(r.n) + " done");
  });

  DriftResult res;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    res.rows.insert(res.rows.end(), points[i].rows.begin(), points[i].rows.end());
    res.h.push_back(hs[i]);
    res.max_H_drift.push_back(points[i].max_H);
    res.max_H_tilde_drift.push_back(points[i].max_Ht);
    res.failed = res.failed || points[i].failed;
  }
  return res;
}

StudyOutput run_drift_study(const ExperimentConfig& cfg, const RunOptions& opts) {
  const DriftResult res = drift_study(cfg, opts);
  const PdeModel model = make_model(cfg);
  StudyOutput out;
  out.numerical_failure = res.failed;

  CsvTable t({"h", "t", "H", "H_tilde", "H_drift", "H_tilde_drift", "n_used", "m_used",
              "noise_floor", "status"});
  for (const auto& r : res.rows) {
    t.add_row({r.h, r.t, r.H, r.H_tilde, r.H_drift, r.H_tilde_drift,
               static_cast<std::int64_t>(r.n_used), r.m_used, r.noise_floor, r.status});
  }
  add_provenance(t, cfg, model);
  out.files.emplace_back("drift.csv", std::move(t));

  const LinearFit fh = fit_loglog(res.h, res.max_H_drift);
  const LinearFit ft = fit_loglog(res.h, res.max_H_tilde_drift);
  CsvTable sum({"h", "max_H_drift", "max_H_tilde_drift", "H_slope", "H_tilde_slope"});
  for (std::size_t i = 0; i < res.h.size(); ++i) {
    sum.add_row({res.h[i], res.max_H_drift[i], res.max_H_tilde_drift[i], fh.slope, ft.slope});
  }
  add_provenance(sum, cfg, model);
  out.files.emplace_back("drift_summary.csv", std::move(sum));
  return out;
}

// ---------------------------------------------------------------------------
// converge

ConvergenceResult convergence_study(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const Setup s(cfg);
  const std::vector<double> hs = step_sizes(cfg);
  const double T = cfg.run.T;
  for (double h : hs) {
    const double n = T / h;
    if (std::abs(n - std::round(n)) > 1e-9 * n) {
      throw ConfigError("converge: T must be an integer multiple of every h");
    }
  }
  const Cutoff m = first_cutoff(cfg);
  const FourierState u0 = project(s.u0, m);

  // Same band, Gauss-3, twenty times finer than the smallest h.
  const double h_ref = hs.back() / 20.0;
  StageSolveConfig ref_stage = s.stage;
  ref_stage.tol = std::min(ref_stage.tol, 1e-14);
  ref_stage.max_iter = std::max(ref_stage.max_iter, 400);
  const StepMap ref_map(s.model, gauss_legendre(3), h_ref, m);
  FourierState ref = u0;
  const std::int64_t n_ref = step_count(T, h_ref);
  for (std::int64_t j = 0; j < n_ref; ++j) ref = ref_map.step(ref, ref_stage);
  log(opts, "converge reference done (" + std::to_string(n_ref) + " steps)");

  ConvergenceResult res;
  res.rows.resize(hs.size());
  parallel_for(hs.size(), opts.threads, [&](std::size_t i) {
    const double h = hs[i];
    const StepMap map(s.model, s.tab, h, m);
    FourierState u = u0;
    const std::int64_t N = step_count(T, h);
    double err = kNaN;
    const std::string st = guarded([&] {
      for (std::int64_t j = 0; j < N; ++j) u = map.step(u, s.stage);
      err = y_norm(u - ref);
    });
    res.rows[i] = {h, err, kNaN, st};
    log(opts, "converge h=" + format_double(h) + " error=" + format_double(err));
  });

  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    const auto& a = res.rows[i - 1];
    auto& b = res.rows[i];
    if (a.error > 0 && b.error > 0) b.slope_estimate = std::log(a.error / b.error) / std::log(a.h / b.h);
  }
  // Errors at the rounding floor would flatten the fit.
  const double floor = 1e-12 * std::max(1.0, y_norm(ref));
  std::vector<double> x, y;
  for (const auto& r : res.rows) {
    if (r.status != "ok") {
      res.failed = true;
      continue;
    }
    if (r.error > floor) {
      x.push_back(r.h);
      y.push_back(r.error);
    }
  }
  res.fit = fit_loglog(x, y);
  return res;
}

StudyOutput run_convergence_study(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ConvergenceResult res = convergence_study(cfg, opts);
  StudyOutput out;
  out.numerical_failure = res.failed;
  CsvTable t({"h", "error", "slope_estimate", "fit_slope", "fit_r2", "status"});
  for (const auto& r : res.rows) {
    t.add_row({r.h, r.error, r.slope_estimate, res.fit.slope, res.fit.r2, r.status});
  }
  add_provenance(t, cfg, make_model(cfg));
  out.files.emplace_back("converge.csv", std::move(t));
  return out;
}

// ---------------------------------------------------------------------------
// projscan

ProjscanResult projection_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const int M = cfg.projscan.reference_band;
  const PdeModel model = make_model(cfg, M);
  const ButcherTableau tab = make_tableau(cfg);
  const StageSolveConfig stage = make_stage_config(cfg);
  const FourierState u0 = make_initial_state(model, cfg.run.initial);
  const double h = cfg.projscan.h;
  const double q = model.q();
  const GevreyIndex y1{0.0, 1.0, q};

  const FourierState full = StepMap(model, tab, h).step(u0, stage);
  const double full_norm = gevrey_norm(full, y1);

  std::vector<std::int64_t> ms = cfg.projscan.m;
  if (ms.empty()) {
    for (int k = 1; k <= M; ++k) {
      ms.push_back(static_cast<std::int64_t>(std::llround(model.space().eigenvalue(k))));
    }
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  const double tau = cfg.run.initial.tau;
  const double L = std::max(0.0, (cfg.run.initial.ell - 0.5) / q - 1.0);

  ProjscanResult res;
  res.rows.resize(ms.size());
  parallel_for(ms.size(), opts.threads, [&](std::size_t i) {
    const std::int64_t m = ms[i];
    const double root = std::pow(static_cast<double>(m), 1.0 / q);
    double err = kNaN;
    const std::string st = guarded([&] {
      const FourierState part = StepMap(model, tab, h, Cutoff(m)).step(u0, stage);
      err = gevrey_norm(full - part, y1);
    });
    const double shape = std::pow(static_cast<double>(m), -L) * std::exp(-tau * root);
    res.rows[i] = {m, root, err, shape, st};
    log(opts, "projscan m=" + std::to_string(m) + " error=" + format_double(err));
  });

  // Drop the reference band itself and errors at the stage-solver floor.
  const double floor = 100.0 * stage.tol * std::max(1.0, full_norm);
  const double top = model.max_eigenvalue();
  std::vector<double> x, y;
  for (auto& r : res.rows) {
    if (r.status != "ok") {
      res.failed = true;
      continue;
    }
    if (static_cast<double>(r.m) >= top * (1 - 1e-12)) continue;
    if (!(r.error_Y1 > floor)) {
      r.status = "floor";
      continue;
    }
    x.push_back(r.m_root);
    y.push_back(std::log(r.error_Y1));
  }
  res.fit = fit_line(x, y);
  return res;
}

StudyOutput run_projection_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ProjscanResult res = projection_scan(cfg, opts);
  StudyOutput out;
  out.numerical_failure = res.failed;
  CsvTable t({"m", "m_root", "error_Y1", "bound_shape", "fit_slope", "fit_r2", "status"});
  for (const auto& r : res.rows) {
    t.add_row({r.m, r.m_root, r.error_Y1, r.bound_shape, res.fit.slope, res.fit.r2, r.status});
  }
  add_provenance(t, cfg, make_model(cfg, cfg.projscan.reference_band));
  out.files.emplace_back("projscan.csv", std::move(t));
  return out;
}

// ---------------------------------------------------------------------------
// bea

BeaResult bea_verify(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const Setup s(cfg);
  const std::vector<double> hs = step_sizes(cfg);
  const std::vector<int> ns = cfg.bea.n;
  const Cutoff m = first_cutoff(cfg);
  const std::int64_t m_label = cutoff_label(m, s.model);
  const FourierState u = project(s.u0, m);
  const double u_norm = std::max(1.0, y_norm(u));
  const int p = s.tab.order;
  const int n_close = cfg.bea.closeness_n > 0 ? cfg.bea.closeness_n : p + 2;
  const bool coupled = policy_mode_from_string(cfg.bea.policy) == PolicyMode::paper_coupled;
  const TruncationPolicy cpol = make_coupled_policy(cfg);
  const double q = cpol.q > 0.0 ? cpol.q : s.model.q();
  const FlowTolerance flow_tol{};

  BeaResult res;
  res.embedding.resize(ns.size() * hs.size());
  res.closeness.resize(hs.size());
  res.gradient.resize(ns.size() * hs.size());
  if (coupled) res.expfit.resize(hs.size());

  // Noise of the coefficients depends on n only; computed once per n.
  std::vector<std::vector<double>> coeff_noise(ns.size());

  std::vector<std::function<void()>> tasks;
  for (std::size_t a = 0; a < ns.size(); ++a) {
    tasks.push_back([&, a] {
      const int n = ns[a];
      std::vector<double> noise(n + 1, 0.0);
      for (int j = p + 1; j <= n; ++j) {
        guarded([&] {
          noise[j] = modified_field_coefficient(s.model, s.tab, j, u, m, s.field_opts).noise;
        });
      }
      coeff_noise[a] = std::move(noise);
    });
  }
  parallel_for(tasks.size(), opts.threads, [&](std::size_t i) { tasks[i](); });
  tasks.clear();

  for (std::size_t a = 0; a < ns.size(); ++a) {
    for (std::size_t b = 0; b < hs.size(); ++b) {
      tasks.push_back([&, a, b] {
        const int n = ns[a];
        const double h = hs[b];
        const ModifiedField field(s.model, s.tab, n, m, s.field_opts);
        double err = kNaN;
        const std::string st = guarded([&] {
          const FourierState psi = StepMap(s.model, s.tab, h, m).step(u, s.stage);
          const FourierState phi = modified_flow(field, u, h, flow_tol);
          err = y_norm(psi - phi);
        });
        double noise = (flow_tol.abs_tol + flow_tol.rel_tol) * u_norm + h * s.stage.tol * u_norm;
        for (int j = p + 1; j <= n; ++j) noise += std::pow(h, j) * coeff_noise[a][j];
        res.embedding[a * hs.size() + b] = {h, n, m_label, err, noise, st};
        log(opts, "bea embedding n=" + std::to_string(n) + " h=" + format_double(h));
      });
      tasks.push_back([&, a, b] {
        const int n = ns[a];
        const double h = hs[b];
        double r = kNaN;
        const std::string st = guarded([&] {
          r = gradient_consistency(s.model, s.tab, TruncationPolicy::explicit_policy(n, m), u, h,
                                   cfg.bea.gradient_dirs, cfg.run.initial.seed, s.field_opts,
                                   s.anchor(m));
        });
        res.gradient[a * hs.size() + b] = {h, n, m_label, r, st};
      });
    }
  }
  for (std::size_t b = 0; b < hs.size(); ++b) {
    tasks.push_back([&, b] {
      const double h = hs[b];
      const ModifiedHamiltonian ham(ModifiedField(s.model, s.tab, n_close, m, s.field_opts),
                                    s.anchor(m), cfg.bea.quadrature_nodes);
      const double H = s.model.hamiltonian(u);
      ModifiedHamiltonian::Checked c{kNaN, kNaN, kNaN};
      const std::string st = guarded([&] { c = ham.value_checked(u, h); });
      res.closeness[b] = {h, n_close, m_label, H, c.value, std::abs(c.value - H), c.rel_diff, st};
    });
    if (!coupled) continue;
    tasks.push_back([&, b] {
      const double h = hs[b];
      const ResolvedPolicy r = resolve_policy(cpol, h, s.tab, s.model, &s.u0);
      const FourierState v0 = project(s.u0, r.m);
      const ModifiedHamiltonian ham(ModifiedField(s.model, s.tab, r.n, r.m, s.field_opts),
                                    s.anchor(r.m), cfg.bea.quadrature_nodes);
      double dt = kNaN, dh = kNaN;
      const std::string st = guarded([&] {
        const FourierState v1 = StepMap(s.model, s.tab, h, r.m).step(v0, s.stage);
        dt = std::abs(ham.value(v1, h) - ham.value(v0, h));
        dh = std::abs(s.model.hamiltonian(v1) - s.model.hamiltonian(v0));
      });
      const double x = std::pow(h, -1.0 / (1.0 + q));
      res.expfit[b] = {h, x, r.n, cutoff_label(r.m, s.model), !r.n_clamped, dt, dh, st};
      log(opts, "bea expfit h=" + format_double(h) + " n=" + std::to_string(r.n));
    });
  }
  parallel_for(tasks.size(), opts.threads, [&](std::size_t i) { tasks[i](); });

  for (std::size_t a = 0; a < ns.size(); ++a) {
    std::vector<double> x, y;
    for (std::size_t b = 0; b < hs.size(); ++b) {
      const auto& r = res.embedding[a * hs.size() + b];
      if (r.status != "ok") continue;
      if (r.error > r.noise_floor) {
        x.push_back(r.h);
        y.push_back(r.error);
      }
    }
    res.embedding_fits.emplace_back(ns[a], fit_loglog(x, y));
  }
  {
    std::vector<double> x, y;
    for (const auto& r : res.closeness) {
      if (r.status != "ok") continue;
      x.push_back(r.h);
      y.push_back(r.diff);
    }
    res.closeness_fit = fit_loglog(x, y);
  }
  {
    std::vector<double> x, y;
    for (const auto& r : res.expfit) {
      if (r.status != "ok" || !r.in_range) continue;
      x.push_back(r.x);
      y.push_back(r.H_tilde_drift);
    }
    res.exp_fit = fit_semilog(x, y);
  }
  auto bad = [](const auto& rows) {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.status != "ok"; });
  };
  res.failed = bad(res.embedding) || bad(res.closeness) || bad(res.gradient) || bad(res.expfit);
  return res;
}

StudyOutput run_bea_verify(const ExperimentConfig& cfg, const RunOptions& opts) {
  const BeaResult res = bea_verify(cfg, opts);
  const PdeModel model = make_model(cfg);
  StudyOutput out;
  out.numerical_failure = res.failed;

  CsvTable emb({"h", "n", "m", "error", "noise_floor", "fit_slope", "fit_r2", "status"});
  for (const auto& r : res.embedding) {
    LinearFit f;
    for (const auto& [n, fit] : res.embedding_fits) {
      if (n == r.n) f = fit;
    }
    emb.add_row({r.h, static_cast<std::int64_t>(r.n), r.m, r.error, r.noise_floor, f.slope, f.r2,
                 r.status});
  }
  add_provenance(emb, cfg, model);
  out.files.emplace_back("bea_embedding.csv", std::move(emb));

  CsvTable clo({"h", "n", "m", "H", "H_tilde", "diff", "quadrature_rel_diff", "fit_slope",
                "status"});
  for (const auto& r : res.closeness) {
    clo.add_row({r.h, static_cast<std::int64_t>(r.n), r.m, r.H, r.H_tilde, r.diff,
                 r.quadrature_rel_diff, res.closeness_fit.slope, r.status});
  }
  add_provenance(clo, cfg, model);
  out.files.emplace_back("bea_closeness.csv", std::move(clo));

  CsvTable gr({"h", "n", "m", "residual", "status"});
  for (const auto& r : res.gradient) {
    gr.add_row({r.h, static_cast<std::int64_t>(r.n), r.m, r.residual, r.status});
  }
  add_provenance(gr, cfg, model);
  out.files.emplace_back("bea_gradient.csv", std::move(gr));

  CsvTable ef({"h", "x", "n", "m", "in_range", "H_tilde_drift", "H_drift", "fit_slope", "fit_r2",
               "status"});
  for (const auto& r : res.expfit) {
    ef.add_row({r.h, r.x, static_cast<std::int64_t>(r.n), r.m,
                static_cast<std::int64_t>(r.in_range ? 1 : 0), r.H_tilde_drift, r.H_drift,
                res.exp_fit.slope, res.exp_fit.r2, r.status});
  }
  add_provenance(ef, cfg, model);
  out.files.emplace_back("bea_expfit.csv", std::move(ef));
  return out;
}

}  // namespace hbea::harness
