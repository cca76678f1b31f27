#pragma once

#include <string>
#include <vector>

#include "endgate/chain.hpp"
#include "endgate/protocol.hpp"
#include "endgate/switched.hpp"

namespace endgate {

/// One row of a trajectory file. For endgate runs k counts gate steps and
/// time is cumulative; for single-shot curves k counts samples and c/d are
/// the no-gate placeholders (0, 1); for switched plans k counts segments.
struct TrajectoryRow {
  int k = 0;
  double time = 0.0;
  double p = 0.0;
  double c_abs = 0.0;
  double d_abs = 1.0;
  bool gate_applied = false;
};

/// Header "k,time,p,c_abs,d_abs,gate_applied"; numbers at 17 significant
/// digits so replays are bit-faithful.
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows);
void write_trajectory_json(const std::string& path, const std::vector<TrajectoryRow>& rows);

std::vector<TrajectoryRow> trajectory_of(const ProtocolTrace& trace);
std::vector<TrajectoryRow> trajectory_of(const SegmentPlan& plan);

/// Self-contained replayable schedule,
///   {schema: 1, kind: "endgate", chain: {...},
///    steps: [{t, c_re, c_im, d_re, d_im, applied}], final_p}
/// (switched plans use kind "switched" with segments: [{t, delta_on, p}]).
/// Skipped steps carry applied = false and null gate entries.
void export_schedule(const ProtocolTrace& trace, const std::string& path);
void export_schedule(const SegmentPlan& plan, const std::string& path);

enum class ScheduleKind { Endgate, Switched };

struct ImportedSchedule {
  ScheduleKind kind = ScheduleKind::Endgate;
  ChainSpec chain;
  std::optional<SwitchMode> mode;  // switched only
  std::vector<StepRecord> steps;   // endgate only
  std::vector<Segment> segments;   // switched only
  double final_probability = 0.0;
};

ImportedSchedule import_schedule(const std::string& path);

/// Re-executes an imported schedule against a freshly built Hamiltonian and
/// returns the replayed per-step probabilities (gates replayed verbatim).
std::vector<double> replay_schedule(const ImportedSchedule& schedule);

}  // namespace endgate
