#include "endgate/schedule_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "endgate/experiment.hpp"

namespace endgate {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw config_error("write failed: " + path);
}

nlohmann::json chain_json(const ChainSpec& spec) {
  nlohmann::json j;
  j["n_sites"] = spec.n_sites;
  j["coupling"] = to_string(spec.coupling_model);
  j["j"] = spec.base_coupling;
  if (spec.disorder) {
    j["sigma"] = spec.disorder->relative_amplitude;
    j["seed"] = spec.disorder->seed;
  }
  if (spec.field_strength) j["b"] = *spec.field_strength;
  return j;
}

ChainSpec chain_from_json(const nlohmann::json& j) {
  ChainSpec spec;
  spec.n_sites = j.at("n_sites").get<int>();
  spec.coupling_model = coupling_model_from_string(j.at("coupling").get<std::string>());
  spec.base_coupling = j.at("j").get<double>();
  if (j.contains("sigma"))
    spec.disorder = DisorderSpec{j.at("sigma").get<double>(), j.at("seed").get<std::uint64_t>()};
  if (j.contains("b")) spec.field_strength = j.at("b").get<double>();
  spec.validate();
  return spec;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows) {
  std::string text = "k,time,p,c_abs,d_abs,gate_applied\n";
  for (const TrajectoryRow& r : rows) {
    text += std::to_string(r.k);
    text += ",";
    text += fmt17(r.time);
    text += ",";
    text += fmt17(r.p);
    text += ",";
    text += fmt17(r.c_abs);
    text += ",";
    text += fmt17(r.d_abs);
    text += ",";
    text += r.gate_applied ? "1" : "0";
    text += "\n";
  }
  write_text(path, text);
}

void write_trajectory_json(const std::string& path, const std::vector<TrajectoryRow>& rows) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  nlohmann::json arr = nlohmann::json::array();
  for (const TrajectoryRow& r : rows) {
    arr.push_back({{"k", r.k},
                   {"time", r.time},
                   {"p", r.p},
                   {"c_abs", r.c_abs},
                   {"d_abs", r.d_abs},
                   {"gate_applied", r.gate_applied}});
  }
  j["rows"] = std::move(arr);
  write_text(path, j.dump(2) + "\n");
}

std::vector<TrajectoryRow> trajectory_of(const ProtocolTrace& trace) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(trace.steps.size());
  double t = 0.0;
  int k = 1;
  for (const StepRecord& s : trace.steps) {
    t += s.duration;
    TrajectoryRow r;
    r.k = k++;
    r.time = t;
    r.p = s.cumulative_probability;
    r.c_abs = s.gate ? std::abs(s.gate->c) : 0.0;
    r.d_abs = s.gate ? std::abs(s.gate->d) : 1.0;
    r.gate_applied = s.gate.has_value();
    rows.push_back(r);
  }
  return rows;
}

std::vector<TrajectoryRow> trajectory_of(const SegmentPlan& plan) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(plan.segments.size());
  double t = 0.0;
  int k = 1;
  for (const Segment& s : plan.segments) {
    t += s.duration;
    TrajectoryRow r;
    r.k = k++;
    r.time = t;
    r.p = s.target_probability;
    r.c_abs = 0.0;
    r.d_abs = 1.0;
    r.gate_applied = s.delta_on == plan.mode.gate_delta();
    rows.push_back(r);
  }
  return rows;
}

void export_schedule(const ProtocolTrace& trace, const std::string& path) {
  if (!trace.spec)
    throw config_error("export_schedule: trace carries no chain spec");
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "endgate";
  j["chain"] = chain_json(*trace.spec);
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& s : trace.steps) {
    nlohmann::json row;
    row["t"] = s.duration;
    if (s.gate) {
      row["c_re"] = s.gate->c.real();
      row["c_im"] = s.gate->c.imag();
      row["d_re"] = s.gate->d.real();
      row["d_im"] = s.gate->d.imag();
      row["applied"] = true;
    } else {
      row["c_re"] = nullptr;
      row["c_im"] = nullptr;
      row["d_re"] = nullptr;
      row["d_im"] = nullptr;
      row["applied"] = false;
    }
    steps.push_back(std::move(row));
  }
  j["steps"] = std::move(steps);
  j["final_p"] = trace.final_probability;
  write_text(path, j.dump(2) + "\n");
}

void export_schedule(const SegmentPlan& plan, const std::string& path) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "switched";
  j["chain"] = chain_json(plan.spec);
  j["mode"] = plan.mode.kind == SwitchKind::Field ? "field" : "coupling";
  if (plan.mode.kind == SwitchKind::Field) j["b"] = plan.mode.field_strength;
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& s : plan.segments)
    segs.push_back({{"t", s.duration}, {"delta_on", s.delta_on}, {"p", s.target_probability}});
  j["segments"] = std::move(segs);
  j["final_p"] = plan.final_probability;
  write_text(path, j.dump(2) + "\n");
}

ImportedSchedule import_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open schedule file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("invalid schedule JSON in ") + path + ": " + e.what());
  }
  if (j.value("schema", 0) != kSchemaVersion)
    throw config_error("unsupported schedule schema in " + path);

  ImportedSchedule sched;
  sched.chain = chain_from_json(j.at("chain"));
  sched.final_probability = j.at("final_p").get<double>();
  const std::string kind = j.value("kind", "endgate");
  if (kind == "endgate") {
    sched.kind = ScheduleKind::Endgate;
    for (const auto& row : j.at("steps")) {
      StepRecord s;
      s.duration = row.at("t").get<double>();
      if (row.at("applied").get<bool>()) {
        s.gate = EndGate{{row.at("c_re").get<double>(), row.at("c_im").get<double>()},
                         {row.at("d_re").get<double>(), row.at("d_im").get<double>()}};
      }
      sched.steps.push_back(std::move(s));
    }
  } else if (kind == "switched") {
    sched.kind = ScheduleKind::Switched;
    SwitchMode mode;
    mode.kind = j.at("mode").get<std::string>() == "field" ? SwitchKind::Field : SwitchKind::Coupling;
    if (mode.kind == SwitchKind::Field) mode.field_strength = j.at("b").get<double>();
    sched.mode = mode;
    for (const auto& row : j.at("segments")) {
      sched.segments.push_back(Segment{row.at("t").get<double>(), row.at("delta_on").get<bool>(),
                                       row.at("p").get<double>()});
    }
  } else {
    throw config_error("unknown schedule kind '" + kind + "' in " + path);
  }
  return sched;
}

std::vector<double> replay_schedule(const ImportedSchedule& schedule) {
  std::vector<double> ps;
  if (schedule.kind == ScheduleKind::Endgate) {
    const SectorHamiltonian h = build_sector(schedule.chain, false);
    const SpectralPropagator p = SpectralPropagator::diagonalize(h);
    SectorState psi = basis_state(p.dimension(), 1);
    const int end = p.end_index();
    for (const StepRecord& s : schedule.steps) {
      psi = p.evolve(psi, s.duration);
      ps.push_back(std::norm(psi(end)) + std::norm(psi(end + 1)));
      if (s.gate) psi = apply_gate(psi, *s.gate, end);
    }
  } else {
    const SwitchMode mode = *schedule.mode;
    const SpectralPropagator frozen = SpectralPropagator::diagonalize(
        build_switched(schedule.chain, mode, mode.frozen_delta()));
    const SpectralPropagator gate = SpectralPropagator::diagonalize(
        build_switched(schedule.chain, mode, mode.gate_delta()));
    SectorState psi = basis_state(frozen.dimension(), 1);
    const int target = frozen.target_index();
    for (const Segment& s : schedule.segments) {
      psi = (s.delta_on == mode.frozen_delta()) ? frozen.evolve(psi, s.duration)
                                                : gate.evolve(psi, s.duration);
      ps.push_back(std::norm(psi(target)));
    }
  }
  return ps;
}

}  // namespace endgate
