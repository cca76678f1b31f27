// Command-line driver for spin-chain end-gate transfer experiments.
//
// Subcommands: run, sweep, export, replay, validate. Exit codes: 0 success,
// 1 invalid config/arguments, 2 numerical failure.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "endgate/config.hpp"
#include "endgate/experiment.hpp"
#include "endgate/schedule_io.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("ENDGATE_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw endgate::config_error("ENDGATE_THREADS is not an integer");
    }
  }
  return 1;
}

endgate::ExperimentConfig load(const std::string& config_path, std::uint64_t seed_override,
                               bool has_seed) {
  endgate::ExperimentConfig cfg = endgate::ExperimentConfig::from_file(config_path);
  if (has_seed) {
    cfg.seed = seed_override;
    if (cfg.chain.disorder) cfg.chain.disorder->seed = seed_override;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"endgate: arbitrarily perfect spin-chain state transfer by end gates"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string schedule_path;
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "config file (INI sections or JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "override the disorder seed")
        ->each([&](const std::string&) { has_seed = true; });
    cmd->add_option("--threads", threads, "worker threads for sweeps (default ENDGATE_THREADS or 1)");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run one experiment and write trajectory/summary");
  add_common(cmd_run, true);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a sweep over the configured axis");
  add_common(cmd_sweep, true);
  CLI::App* cmd_export = app.add_subcommand("export", "run and export a replayable schedule");
  add_common(cmd_export, true);
  CLI::App* cmd_replay = app.add_subcommand("replay", "re-execute an exported schedule");
  cmd_replay->add_option("--schedule", schedule_path, "schedule JSON file")->required();
  cmd_replay->add_option("--out", out_dir, "output directory");
  CLI::App* cmd_validate = app.add_subcommand("validate", "parse and validate a config");
  cmd_validate->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (threads == 0) threads = default_threads();

    if (cmd_validate->parsed()) {
      endgate::ExperimentConfig cfg = load(config_path, seed_override, has_seed);
      std::cout << "ok: " << to_string(cfg.experiment) << " experiment, N=" << cfg.chain.n_sites
                << ", " << to_string(cfg.chain.coupling_model) << " chain\n";
      return 0;
    }
    if (cmd_run->parsed()) {
      endgate::ExperimentConfig cfg = load(config_path, seed_override, has_seed);
      const endgate::RunSummary s = endgate::run_config(cfg, out_dir);
      std::cout << "final_p=" << s.final_p << " max_p=" << s.max_p
                << " avg_fidelity=" << s.average_fidelity << " steps=" << s.steps << "\n";
      return 0;
    }
    if (cmd_sweep->parsed()) {
      endgate::ExperimentConfig cfg = load(config_path, seed_override, has_seed);
      const auto rows = endgate::run_sweep(cfg, out_dir, threads);
      for (const auto& r : rows)
        std::cout << "axis=" << r.axis_value << " final_p=" << r.summary.final_p
                  << " gates=" << r.summary.gates_applied << "\n";
      return 0;
    }
    if (cmd_export->parsed()) {
      endgate::ExperimentConfig cfg = load(config_path, seed_override, has_seed);
      if (cfg.experiment != endgate::ExperimentKind::Endgate &&
          cfg.experiment != endgate::ExperimentKind::Switched)
        throw endgate::config_error("export needs an endgate or switched experiment");
      endgate::run_config(cfg, out_dir);
      std::cout << "schedule written under " << out_dir << "\n";
      return 0;
    }
    if (cmd_replay->parsed()) {
      const endgate::ImportedSchedule sched = endgate::import_schedule(schedule_path);
      const std::vector<double> ps = endgate::replay_schedule(sched);
      const double final_p = ps.empty() ? 0.0 : ps.back();
      const double defect = std::abs(final_p - sched.final_probability);
      std::cout << "replayed " << ps.size() << " steps, final_p=" << final_p
                << " recorded=" << sched.final_probability << " |diff|=" << defect << "\n";
      if (defect > 1e-9) {
        std::cerr << "replay mismatch above 1e-9\n";
        return 2;
      }
      return 0;
    }
  } catch (const endgate::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const endgate::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
