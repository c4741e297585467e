#include "hbea/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hbea/errors.hpp"

namespace hbea::harness {

namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + "." + key + ": " + e.msg);
  }
}

void parse_model(const YAML::Node& n, ModelSection& m) {
  check_keys(n, "model", {"name", "band", "n_phys", "lambda", "sigma", "potential",
                          "coefficients", "gamma", "rho_min"});
  read(n, "name", m.name, "model");
  read(n, "band", m.band, "model");
  read(n, "n_phys", m.n_phys, "model");
  read(n, "lambda", m.lambda, "model");
  read(n, "sigma", m.sigma, "model");
  read(n, "potential", m.potential, "model");
  read(n, "coefficients", m.coefficients, "model");
  read(n, "gamma", m.gamma, "model");
  read(n, "rho_min", m.rho_min, "model");
}

void parse_method(const YAML::Node& n, MethodSection& m) {
  check_keys(n, "method", {"tableau", "stage_tol", "max_iter", "scheme"});
  read(n, "tableau", m.tableau, "method");
  read(n, "stage_tol", m.stage_tol, "method");
  read(n, "max_iter", m.max_iter, "method");
  read(n, "scheme", m.scheme, "method");
}

void parse_initial(const YAML::Node& n, InitialConditionSpec& ic) {
  check_keys(n, "run.initial", {"kind", "tau", "ell", "amplitude", "seed", "k", "modes"});
  read(n, "kind", ic.kind, "run.initial");
  read(n, "tau", ic.tau, "run.initial");
  read(n, "ell", ic.ell, "run.initial");
  read(n, "amplitude", ic.amplitude, "run.initial");
  read(n, "seed", ic.seed, "run.initial");
  read(n, "k", ic.k, "run.initial");
  if (const YAML::Node modes = n["modes"]) {
    if (!modes.IsSequence()) throw ConfigError("run.initial.modes: expected a sequence");
    ic.modes.clear();
    for (const auto& e : modes) {
      check_keys(e, "run.initial.modes[]", {"k", "component", "re", "im"});
      ExplicitMode mode;
      read(e, "k", mode.k, "run.initial.modes[]");
      read(e, "component", mode.component, "run.initial.modes[]");
      read(e, "re", mode.re, "run.initial.modes[]");
      read(e, "im", mode.im, "run.initial.modes[]");
      ic.modes.push_back(mode);
    }
  }
}

void parse_run(const YAML::Node& n, RunSection& r) {
  check_keys(n, "run", {"h", "h_range", "T", "sample_every", "initial"});
  read(n, "h", r.h, "run");
  if (const YAML::Node hr = n["h_range"]) {
    check_keys(hr, "run.h_range", {"start", "factor", "count"});
    read(hr, "start", r.h_range.start, "run.h_range");
    read(hr, "factor", r.h_range.factor, "run.h_range");
    read(hr, "count", r.h_range.count, "run.h_range");
  }
  read(n, "T", r.T, "run");
  read(n, "sample_every", r.sample_every, "run");
  if (const YAML::Node ic = n["initial"]) parse_initial(ic, r.initial);
}

void parse_bea(const YAML::Node& n, BeaSection& b) {
  check_keys(n, "bea", {"policy", "n", "m", "tau", "q", "delta", "c_F", "chi", "n_max", "engine",
                        "quadrature_nodes", "closeness_n", "gradient_dirs"});
  read(n, "policy", b.policy, "bea");
  read(n, "n", b.n, "bea");
  read(n, "m", b.m, "bea");
  read(n, "tau", b.tau, "bea");
  read(n, "q", b.q, "bea");
  read(n, "delta", b.delta, "bea");
  read(n, "c_F", b.c_F, "bea");
  read(n, "chi", b.chi, "bea");
  read(n, "n_max", b.n_max, "bea");
  read(n, "engine", b.engine, "bea");
  read(n, "quadrature_nodes", b.quadrature_nodes, "bea");
  read(n, "closeness_n", b.closeness_n, "bea");
  read(n, "gradient_dirs", b.gradient_dirs, "bea");
}

void parse_projscan(const YAML::Node& n, ProjscanSection& p) {
  check_keys(n, "projscan", {"m", "reference_band", "h"});
  read(n, "m", p.m, "projscan");
  read(n, "reference_band", p.reference_band, "projscan");
  read(n, "h", p.h, "projscan");
}

void parse_output(const YAML::Node& n, OutputSection& o) {
  check_keys(n, "output", {"dir", "formats"});
  read(n, "dir", o.dir, "output");
  read(n, "formats", o.formats, "output");
}

template <class T>
void emit_seq(YAML::Emitter& e, const char* key, const std::vector<T>& v) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& x : v) e << x;
  e << YAML::EndSeq;
}

}  // namespace

std::vector<double> RunSection::h_values() const {
  std::vector<double> out;
  if (h_range.count > 0) {
    double x = h_range.start;
    for (int i = 0; i < h_range.count; ++i) {
      out.push_back(x);
      x *= h_range.factor;
    }
  } else {
    out = h;
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

void ExperimentConfig::validate() const {
  if (model.band < 1) throw ConfigError("model.band must be >= 1");
  try {
    make_model(*this);
    make_tableau(*this);
    make_stage_config(*this).validate();
    make_field_options(*this);
    policy_mode_from_string(bea.policy);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (model.potential != "polynomial" && model.potential != "sine_gordon") {
    throw ConfigError("model.potential must be polynomial or sine_gordon");
  }
  const auto hs = run.h_values();
  for (double h : hs) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("run.h: values must be positive");
  }
  for (std::size_t i = 1; i < hs.size(); ++i) {
    if (hs[i] == hs[i - 1]) throw ConfigError("run.h: duplicate values");
  }
  if (run.h_range.count > 0 && !(run.h_range.factor > 0.0 && run.h_range.factor != 1.0)) {
    throw ConfigError("run.h_range.factor must be positive and != 1");
  }
  if (!(run.T > 0.0)) throw ConfigError("run.T must be > 0");
  if (run.sample_every < 1) throw ConfigError("run.sample_every must be >= 1");
  const auto& ic = run.initial;
  if (ic.kind != "gevrey_decay" && ic.kind != "plane_wave" && ic.kind != "explicit") {
    throw ConfigError("run.initial.kind must be gevrey_decay, plane_wave or explicit");
  }
  if (!(ic.tau >= 0.0) || !(ic.ell >= 0.0)) throw ConfigError("run.initial: tau, ell must be >= 0");
  if (!std::isfinite(ic.amplitude)) throw ConfigError("run.initial.amplitude must be finite");
  for (int n : bea.n) {
    if (n < 1) throw ConfigError("bea.n: entries must be >= 1");
  }
  for (auto m : bea.m) {
    if (m < 0) throw ConfigError("bea.m: entries must be >= 0");
  }
  if (bea.n_max < 1) throw ConfigError("bea.n_max must be >= 1");
  if (bea.quadrature_nodes < 1) throw ConfigError("bea.quadrature_nodes must be >= 1");
  if (!(bea.tau > 0.0)) throw ConfigError("bea.tau must be > 0");
  for (auto m : projscan.m) {
    if (m < 0) throw ConfigError("projscan.m: entries must be >= 0");
  }
  if (projscan.reference_band < 1) throw ConfigError("projscan.reference_band must be >= 1");
  if (!(projscan.h > 0.0)) throw ConfigError("projscan.h must be > 0");
  for (const auto& f : output.formats) {
    if (f != "csv" && f != "plots") throw ConfigError("output.formats: entries are csv or plots");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  check_keys(root, "config", {"model", "method", "run", "bea", "projscan", "output"});
  if (root["model"]) parse_model(root["model"], cfg.model);
  if (root["method"]) parse_method(root["method"], cfg.method);
  if (root["run"]) parse_run(root["run"], cfg.run);
  if (root["bea"]) parse_bea(root["bea"], cfg.bea);
  if (root["projscan"]) parse_projscan(root["projscan"], cfg.projscan);
  if (root["output"]) parse_output(root["output"], cfg.output);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;

  e << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << c.model.name;
  e << YAML::Key << "band" << YAML::Value << c.model.band;
  e << YAML::Key << "n_phys" << YAML::Value << c.model.n_phys;
  e << YAML::Key << "lambda" << YAML::Value << c.model.lambda;
  e << YAML::Key << "sigma" << YAML::Value << c.model.sigma;
  e << YAML::Key << "potential" << YAML::Value << c.model.potential;
  emit_seq(e, "coefficients", c.model.coefficients);
  e << YAML::Key << "gamma" << YAML::Value << c.model.gamma;
  e << YAML::Key << "rho_min" << YAML::Value << c.model.rho_min;
  e << YAML::EndMap;

  e << YAML::Key << "method" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "tableau" << YAML::Value << c.method.tableau;
  e << YAML::Key << "stage_tol" << YAML::Value << c.method.stage_tol;
  e << YAML::Key << "max_iter" << YAML::Value << c.method.max_iter;
  e << YAML::Key << "scheme" << YAML::Value << c.method.scheme;
  e << YAML::EndMap;

  const auto& ic = c.run.initial;
  e << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  emit_seq(e, "h", c.run.h);
  e << YAML::Key << "h_range" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "start" << YAML::Value << c.run.h_range.start;
  e << YAML::Key << "factor" << YAML::Value << c.run.h_range.factor;
  e << YAML::Key << "count" << YAML::Value << c.run.h_range.count;
  e << YAML::EndMap;
  e << YAML::Key << "T" << YAML::Value << c.run.T;
  e << YAML::Key << "sample_every" << YAML::Value << c.run.sample_every;
  e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << ic.kind;
  e << YAML::Key << "tau" << YAML::Value << ic.tau;
  e << YAML::Key << "ell" << YAML::Value << ic.ell;
  e << YAML::Key << "amplitude" << YAML::Value << ic.amplitude;
  e << YAML::Key << "seed" << YAML::Value << ic.seed;
  e << YAML::Key << "k" << YAML::Value << ic.k;
  e << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : ic.modes) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "k" << YAML::Value << m.k;
    e << YAML::Key << "component" << YAML::Value << m.component;
    e << YAML::Key << "re" << YAML::Value << m.re;
    e << YAML::Key << "im" << YAML::Value << m.im;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  e << YAML::EndMap;
  e << YAML::EndMap;

  e << YAML::Key << "bea" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "policy" << YAML::Value << c.bea.policy;
  emit_seq(e, "n", c.bea.n);
  emit_seq(e, "m", c.bea.m);
  e << YAML::Key << "tau" << YAML::Value << c.bea.tau;
  e << YAML::Key << "q" << YAML::Value << c.bea.q;
  e << YAML::Key << "delta" << YAML::Value << c.bea.delta;
  e << YAML::Key << "c_F" << YAML::Value << c.bea.c_F;
  e << YAML::Key << "chi" << YAML::Value << c.bea.chi;
  e << YAML::Key << "n_max" << YAML::Value << c.bea.n_max;
  e << YAML::Key << "engine" << YAML::Value << c.bea.engine;
  e << YAML::Key << "quadrature_nodes" << YAML::Value << c.bea.quadrature_nodes;
  e << YAML::Key << "closeness_n" << YAML::Value << c.bea.closeness_n;
  e << YAML::Key << "gradient_dirs" << YAML::Value << c.bea.gradient_dirs;
  e << YAML::EndMap;

  e << YAML::Key << "projscan" << YAML::Value << YAML::BeginMap;
  emit_seq(e, "m", c.projscan.m);
  e << YAML::Key << "reference_band" << YAML::Value << c.projscan.reference_band;
  e << YAML::Key << "h" << YAML::Value << c.projscan.h;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dir" << YAML::Value << c.output.dir;
  emit_seq(e, "formats", c.output.formats);
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Where the tables go does not change what is in them.
  ExperimentConfig c = cfg;
  c.output = OutputSection{};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PdeModel make_model(const ExperimentConfig& cfg) { return make_model(cfg, cfg.model.band); }

PdeModel make_model(const ExperimentConfig& cfg, int band) {
  ModelParams p;
  p.kind = model_kind_from_string(cfg.model.name);
  p.max_mode = band;
  p.n_phys = band == cfg.model.band ? cfg.model.n_phys : 0;
  p.lambda = cfg.model.lambda;
  p.sigma = cfg.model.sigma;
  p.potential.kind = cfg.model.potential == "sine_gordon" ? WavePotential::Kind::sine_gordon
                                                          : WavePotential::Kind::polynomial;
  p.potential.coefficients = cfg.model.coefficients;
  p.potential.gamma = cfg.model.gamma;
  p.rho_min = cfg.model.rho_min;
  return PdeModel(p);
}

ButcherTableau make_tableau(const ExperimentConfig& cfg) { return tableau_by_id(cfg.method.tableau); }

StageSolveConfig make_stage_config(const ExperimentConfig& cfg) {
  StageSolveConfig s;
  s.tol = cfg.method.stage_tol;
  s.max_iter = cfg.method.max_iter;
  s.scheme = stage_scheme_from_string(cfg.method.scheme);
  return s;
}

ModifiedFieldOptions make_field_options(const ExperimentConfig& cfg) {
  ModifiedFieldOptions o;
  o.engine = field_engine_from_string(cfg.bea.engine);
  return o;
}

Cutoff first_cutoff(const ExperimentConfig& cfg) {
  return cfg.bea.m.empty() ? Cutoff::full() : Cutoff(cfg.bea.m.front());
}

TruncationPolicy make_coupled_policy(const ExperimentConfig& cfg) {
  TruncationPolicy p;
  p.mode = PolicyMode::paper_coupled;
  p.tau = cfg.bea.tau;
  p.q = cfg.bea.q;
  p.delta = cfg.bea.delta;
  p.c_F = cfg.bea.c_F;
  p.chi = cfg.bea.chi;
  p.n_max = cfg.bea.n_max;
  return p;
}

TruncationPolicy make_policy(const ExperimentConfig& cfg) {
  if (policy_mode_from_string(cfg.bea.policy) == PolicyMode::paper_coupled) {
    return make_coupled_policy(cfg);
  }
  return TruncationPolicy::explicit_policy(cfg.bea.n.empty() ? 1 : cfg.bea.n.front(),
                                           first_cutoff(cfg));
}

}  // namespace hbea::harness
