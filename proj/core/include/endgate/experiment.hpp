#pragma once

#include <optional>
#include <string>
#include <vector>

#include "endgate/config.hpp"
#include "endgate/propagator.hpp"
#include "endgate/protocol.hpp"
#include "endgate/schedule_io.hpp"

namespace endgate {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Summary record of one run; serialized to <stem>_summary.json.
/// wall_time_ms is informational and excluded from the determinism contract.
struct RunSummary {
  std::string experiment;
  double final_p = 0.0;
  double average_fidelity = 0.0;
  double max_p = 0.0;
  double argmax_time = 0.0;
  int gates_applied = 0;
  int steps = 0;
  double wall_time_ms = 0.0;
  std::string version = kVersion;
  int schema = kSchemaVersion;

  std::string to_json() const;
};

struct RunResult {
  RunSummary summary;
  std::vector<TrajectoryRow> trajectory;
  std::optional<ProtocolTrace> trace;   // endgate runs
  std::optional<SegmentPlan> plan;      // switched runs
};

/// Time of the maximum of |<N| U(t) |1>| over (0, window] (grid + golden
/// refinement); the "first-peak" arrival time when the window spans one pass.
double peak_transfer_time(const SpectralPropagator& p, double window, double grid_step = 0.01);

/// Executes a non-sweep experiment in memory.
RunResult run_experiment(const ExperimentConfig& config);

/// Executes the experiment and writes trajectory + summary (and, for endgate
/// and switched runs, a replayable schedule) under out_dir. Returns the
/// summary. Paths: <stem>_trajectory.csv|.json, <stem>_summary.json,
/// <stem>_schedule.json.
RunSummary run_config(const ExperimentConfig& config, const std::string& out_dir);

struct SweepRow {
  double axis_value = 0.0;
  RunSummary summary;
};

/// One run per axis value, executed on `threads` workers (0 = hardware);
/// row order follows the axis order regardless of thread count.
std::vector<SweepRow> sweep(const ExperimentConfig& config, int threads = 1);

/// sweep() plus CSV/JSON output under out_dir.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::string& out_dir,
                                int threads = 1);

}  // namespace endgate
