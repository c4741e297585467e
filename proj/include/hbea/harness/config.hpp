#pragma once

// Experiment configuration, stored as YAML. See README.md for the grammar.

#include <cstdint>
#include <string>
#include <vector>

#include "hbea/bea.hpp"
#include "hbea/models.hpp"
#include "hbea/rk.hpp"

namespace hbea::harness {

struct ModelSection {
  std::string name = "nls";
  int band = 16;
  int n_phys = 0;
  double lambda = 1.0;
  int sigma = 1;
  std::string potential = "polynomial";
  std::vector<double> coefficients;
  double gamma = 1.0;
  double rho_min = 1e-3;

  bool operator==(const ModelSection&) const = default;
};

struct MethodSection {
  std::string tableau = "gauss1";
  double stage_tol = 1e-12;
  int max_iter = 200;
  std::string scheme = "fixed_point";

  bool operator==(const MethodSection&) const = default;
};

struct ExplicitMode {
  int k = 0;
  int component = 0;
  double re = 0.0;
  double im = 0.0;

  bool operator==(const ExplicitMode&) const = default;
};

struct InitialConditionSpec {
  std::string kind = "gevrey_decay";  // gevrey_decay | plane_wave | explicit
  double tau = 1.0;
  double ell = 0.0;
  double amplitude = 0.5;
  std::uint64_t seed = 1;
  int k = 1;
  std::vector<ExplicitMode> modes;

  bool operator==(const InitialConditionSpec&) const = default;
};

struct HRange {
  double start = 0.0;
  double factor = 0.5;
  int count = 0;

  bool operator==(const HRange&) const = default;
};

struct RunSection {
  std::vector<double> h;
  HRange h_range;
  double T = 1.0;
  int sample_every = 1;
  InitialConditionSpec initial;

  /// The explicit list, or the geometric range when count > 0; descending.
  std::vector<double> h_values() const;

  bool operator==(const RunSection&) const = default;
};

struct BeaSection {
  std::string policy = "explicit";
  std::vector<int> n{1};
  std::vector<std::int64_t> m;  // empty: full band
  double tau = 1.0;
  double q = 0.0;
  double delta = 0.25;
  double c_F = 0.0;
  double chi = 0.0;
  int n_max = 6;
  std::string engine = "iterate_log";
  int quadrature_nodes = 16;
  int closeness_n = 0;  // 0: p + 2
  int gradient_dirs = 3;

  bool operator==(const BeaSection&) const = default;
};

struct ProjscanSection {
  std::vector<std::int64_t> m;
  int reference_band = 32;
  double h = 0.01;

  bool operator==(const ProjscanSection&) const = default;
};

struct OutputSection {
  std::string dir = "out";
  std::vector<std::string> formats{"csv"};

  bool operator==(const OutputSection&) const = default;
};

struct ExperimentConfig {
  ModelSection model;
  MethodSection method;
  RunSection run;
  BeaSection bea;
  ProjscanSection projscan;
  OutputSection output;

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError on syntax errors, unknown keys or invalid values.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a 64 of the serialised config without its output section, as 16
/// hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// Library objects built from a config.
PdeModel make_model(const ExperimentConfig& cfg);
PdeModel make_model(const ExperimentConfig& cfg, int band);
ButcherTableau make_tableau(const ExperimentConfig& cfg);
StageSolveConfig make_stage_config(const ExperimentConfig& cfg);
ModifiedFieldOptions make_field_options(const ExperimentConfig& cfg);
/// Explicit policy from the first n and m entries, or the coupled policy.
TruncationPolicy make_policy(const ExperimentConfig& cfg);
TruncationPolicy make_coupled_policy(const ExperimentConfig& cfg);
Cutoff first_cutoff(const ExperimentConfig& cfg);

}  // namespace hbea::harness
