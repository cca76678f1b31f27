#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "endgate/chain.hpp"
#include "endgate/switched.hpp"

namespace endgate {

enum class ExperimentKind { SingleShot, Endgate, Switched, Sweep };
enum class OutputFormat { Csv, Json };

std::string to_string(ExperimentKind k);

/// Gate timing for endgate runs: equidistant (total_time / gate_count, or an
/// explicit tau), peak-timed (adaptive per-step peak seek), or an explicit
/// interval list.
struct ScheduleConfig {
  enum class Mode { Equidistant, PeakTimed, Explicit };
  Mode mode = Mode::Equidistant;
  double total_time = 0.0;
  double tau = 0.0;  // alternative to total_time: every interval equals tau
  int gate_count = 1;
  std::vector<double> intervals;
  double window = 0.0;             // peak-timed lookahead; 0 = 2N/J
  double target_probability = 0.0; // peak-timed early stop; 0 = run all gates
};

struct SweepConfig {
  enum class Axis { GateCount, Seed, Field };
  Axis axis = Axis::GateCount;
  std::vector<double> values;
};

struct ExperimentConfig {
  ChainSpec chain;
  ExperimentKind experiment = ExperimentKind::SingleShot;
  ScheduleConfig schedule;
  std::optional<SwitchMode> switch_mode;
  std::optional<GreedyParams> greedy;
  std::optional<SweepConfig> sweep;
  OutputFormat output_format = OutputFormat::Csv;
  std::string output_stem = "run";
  std::uint64_t seed = 0;           // disorder seed unless the chain pins one
  double single_shot_window = 2000.0;
  double single_shot_grid = 0.01;

  /// Throws config_error on any violated invariant.
  void validate() const;

  /// Parses INI-style key-value sections, or JSON when the file ends in
  /// ".json" (or the text starts with '{').
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_ini_text(const std::string& text);
  static ExperimentConfig from_json_text(const std::string& text);
};

}  // namespace endgate
