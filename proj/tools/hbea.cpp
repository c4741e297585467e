// Command-line front end for the experiment drivers.
//
//   hbea <integrate|drift|converge|projscan|bea> --config c.yaml [--out dir]
//        [--seed n] [--threads n] [--verbose]
//   hbea plots [--out dir] [csv ...]
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "hbea/errors.hpp"
#include "hbea/harness/config.hpp"
#include "hbea/harness/experiments.hpp"
#include "hbea/harness/plots.hpp"

namespace {

using namespace hbea;
using namespace hbea::harness;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;
constexpr int kIo = 4;

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  bool verbose = false;
};

using Study = std::function<StudyOutput(const ExperimentConfig&, const RunOptions&)>;

int run_study(const Common& c, const Study& study) {
  ExperimentConfig cfg = load_config(c.config);
  if (c.seed_set) cfg.run.initial.seed = c.seed;
  if (!c.out.empty()) cfg.output.dir = c.out;
  cfg.validate();
  const RunOptions opts{std::max(1, c.threads), c.verbose};
  const StudyOutput out = study(cfg, opts);
  const std::vector<std::string> paths = write_study(out, cfg.output.dir);
  for (const auto& p : paths) std::cout << p << '\n';
  if (std::find(cfg.output.formats.begin(), cfg.output.formats.end(), "plots") !=
      cfg.output.formats.end()) {
    for (const auto& s : emit_plots(paths)) std::cout << s << '\n';
  }
  if (out.numerical_failure) {
    std::cerr << "hbea: some parameter points failed numerically; see the status column\n";
    return kNumerical;
  }
  return kOk;
}

int run_plots(const std::string& out, std::vector<std::string> csvs) {
  if (csvs.empty()) {
    const std::string dir = out.empty() ? "." : out;
    if (!std::filesystem::is_directory(dir)) throw IoError("plots: no such directory: " + dir);
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.path().extension() == ".csv") csvs.push_back(e.path().string());
    }
    std::sort(csvs.begin(), csvs.end());
    for (const auto& s : emit_plots(csvs)) std::cout << s << '\n';
  } else {
    for (const auto& s : emit_plots(csvs, out)) std::cout << s << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backward error analysis experiments for Hamiltonian PDEs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HBEA_VERSION));

  Common common;
  std::vector<std::string> plot_csvs;
  const std::map<std::string, std::pair<std::string, Study>> studies{
      {"integrate", {"Integrate and record H along the trajectory", run_integrate}},
      {"drift", {"Energy drift of H and H~ over [0, T]", run_drift_study}},
      {"converge", {"Global error at T against a fine Gauss-3 reference", run_convergence_study}},
      {"projscan", {"Spectral projection error against the cutoff m", run_projection_scan}},
      {"bea", {"Embedding, closeness, gradient and exponential-fit tables", run_bea_verify}},
  };

  for (const auto& [name, entry] : studies) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", common.config, "YAML experiment config")->required();
    sub->add_option("--out", common.out, "Output directory (overrides output.dir)");
    sub->add_option("--seed", common.seed, "Seed for the initial data")
        ->each([&](const std::string&) { common.seed_set = true; });
    sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", common.verbose, "Progress on stderr");
  }
  CLI::App* plots = app.add_subcommand("plots", "Write matplotlib scripts for CSV tables");
  plots->add_option("--out", common.out, "Directory to scan, or to write scripts into");
  plots->add_option("csv", plot_csvs, "CSV files (default: every *.csv in --out)");
  plots->add_option("--config", common.config, "Ignored; accepted for symmetry");
  plots->add_flag("--verbose", common.verbose, "Unused");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (plots->parsed()) return run_plots(common.out, plot_csvs);
    for (const auto& [name, entry] : studies) {
      if (app.got_subcommand(name)) return run_study(common, entry.second);
    }
  } catch (const ConfigError& e) {
    std::cerr << "hbea: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "hbea: invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "hbea: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "hbea: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "hbea: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
