#pragma once

// Experiment drivers. Parameter points run on up to `threads` workers; rows
// are sorted before they are written, so output does not depend on timing.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hbea/harness/config.hpp"
#include "hbea/harness/csv.hpp"
#include "hbea/harness/fit.hpp"

namespace hbea::harness {

struct RunOptions {
  int threads = 1;
  bool verbose = false;
};

/// Named CSV files produced by one study.
struct StudyOutput {
  std::vector<std::pair<std::string, CsvTable>> files;
  /// Set when at least one parameter point failed numerically.
  bool numerical_failure = false;
};

// -- integrate ---------------------------------------------------------------

StudyOutput run_integrate(const ExperimentConfig& cfg, const RunOptions& opts = {});

// -- drift -------------------------------------------------------------------

struct DriftRow {
  double h, t, H, H_tilde, H_drift, H_tilde_drift;
  int n_used;
  std::int64_t m_used;
  double noise_floor;
  std::string status;
};

struct DriftResult {
  std::vector<DriftRow> rows;
  /// Per h: max_j |H(U^j) − H(U⁰)| and the same for H̃.
  std::vector<double> h, max_H_drift, max_H_tilde_drift;
  bool failed = false;
};

DriftResult drift_study(const ExperimentConfig& cfg, const RunOptions& opts = {});
StudyOutput run_drift_study(const ExperimentConfig& cfg, const RunOptions& opts = {});

// -- converge ----------------------------------------------------------------

struct ConvergenceRow {
  double h, error, slope_estimate;
  std::string status;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  LinearFit fit;
  bool failed = false;
};

ConvergenceResult convergence_study(const ExperimentConfig& cfg, const RunOptions& opts = {});
StudyOutput run_convergence_study(const ExperimentConfig& cfg, const RunOptions& opts = {});

// -- projscan ----------------------------------------------------------------

struct ProjscanRow {
  std::int64_t m;
  double m_root, error_Y1, bound_shape;
  std::string status;
};

struct ProjscanResult {
  std::vector<ProjscanRow> rows;
  LinearFit fit;  // log(error) against m^{1/q}
  bool failed = false;
};

ProjscanResult projection_scan(const ExperimentConfig& cfg, const RunOptions& opts = {});
StudyOutput run_projection_scan(const ExperimentConfig& cfg, const RunOptions& opts = {});

// -- bea ---------------------------------------------------------------------

struct EmbeddingRow {
  double h;
  int n;
  std::int64_t m;
  double error, noise_floor;
  std::string status;
};

struct ClosenessRow {
  double h;
  int n;
  std::int64_t m;
  double H, H_tilde, diff, quadrature_rel_diff;
  std::string status;
};

struct GradientRow {
  double h;
  int n;
  std::int64_t m;
  double residual;
  std::string status;
};

struct ExpFitRow {
  double h, x;  // x = h^{−1/(1+q)}
  int n;
  std::int64_t m;
  bool in_range;
  double H_tilde_drift, H_drift;
  std::string status;
};

struct BeaResult {
  std::vector<EmbeddingRow> embedding;
  std::vector<ClosenessRow> closeness;
  std::vector<GradientRow> gradient;
  std::vector<ExpFitRow> expfit;
  /// Slope of log embedding error against log h, per n (pairs n, fit).
  std::vector<std::pair<int, LinearFit>> embedding_fits;
  LinearFit closeness_fit;
  LinearFit exp_fit;
  bool failed = false;
};

BeaResult bea_verify(const ExperimentConfig& cfg, const RunOptions& opts = {});
StudyOutput run_bea_verify(const ExperimentConfig& cfg, const RunOptions& opts = {});

// -- output ------------------------------------------------------------------

/// Creates the directory and writes every file; throws IoError.
std::vector<std::string> write_study(const StudyOutput& out, const std::string& dir);

/// Appends config_hash, code_version, tableau, stage_tol and max_iter to every
/// row, plus the configured n and m when the table has no such columns.
void add_provenance(CsvTable& table, const ExperimentConfig& cfg, const PdeModel& model);

/// Cutoff as written to CSV; the full band is reported as its largest eigenvalue.
std::int64_t cutoff_label(Cutoff m, const PdeModel& model);

}  // namespace hbea::harness
