#include "endgate/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace endgate {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SingleShot: return "single_shot";
    case ExperimentKind::Endgate: return "endgate";
    case ExperimentKind::Switched: return "switched";
    case ExperimentKind::Sweep: return "sweep";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: '" + key + "' is not a number: '" + v + "'");
  }
}

long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: '" + key + "' is not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw config_error("config: '" + key + "' is not an unsigned integer: '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  if (out.empty()) throw config_error("config: '" + key + "' needs a comma-separated list");
  return out;
}

using KvMap = std::map<std::string, std::string>;

ExperimentConfig build_from_map(KvMap kv) {
  ExperimentConfig cfg;
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  // [chain]
  if (auto v = take("chain.n_sites")) cfg.chain.n_sites = static_cast<int>(to_int("chain.n_sites", *v));
  if (auto v = take("chain.coupling")) cfg.chain.coupling_model = coupling_model_from_string(lower(*v));
  if (auto v = take("chain.j")) cfg.chain.base_coupling = to_double("chain.j", *v);
  if (auto v = take("chain.b")) cfg.chain.field_strength = to_double("chain.b", *v);
  std::optional<double> sigma;
  std::optional<std::uint64_t> dseed;
  if (auto v = take("chain.sigma")) sigma = to_double("chain.sigma", *v);
  if (auto v = take("chain.seed")) dseed = to_u64("chain.seed", *v);
  if (sigma && *sigma > 0.0) cfg.chain.disorder = DisorderSpec{*sigma, dseed.value_or(0)};

  // [experiment]
  if (auto v = take("experiment.kind")) {
    const std::string k = lower(*v);
    if (k == "single_shot") cfg.experiment = ExperimentKind::SingleShot;
    else if (k == "endgate") cfg.experiment = ExperimentKind::Endgate;
    else if (k == "switched") cfg.experiment = ExperimentKind::Switched;
    else if (k == "sweep") cfg.experiment = ExperimentKind::Sweep;
    else throw config_error("config: unknown experiment kind '" + *v + "'");
  } else {
    throw config_error("config: experiment.kind is required");
  }

  // [schedule]
  if (auto v = take("schedule.mode")) {
    const std::string m = lower(*v);
    if (m == "equidistant") cfg.schedule.mode = ScheduleConfig::Mode::Equidistant;
    else if (m == "peak_timed") cfg.schedule.mode = ScheduleConfig::Mode::PeakTimed;
    else if (m == "explicit") cfg.schedule.mode = ScheduleConfig::Mode::Explicit;
    else throw config_error("config: unknown schedule mode '" + *v + "'");
  }
  if (auto v = take("schedule.total_time")) cfg.schedule.total_time = to_double("schedule.total_time", *v);
  if (auto v = take("schedule.tau")) cfg.schedule.tau = to_double("schedule.tau", *v);
  if (auto v = take("schedule.gate_count")) cfg.schedule.gate_count = static_cast<int>(to_int("schedule.gate_count", *v));
  if (auto v = take("schedule.intervals")) cfg.schedule.intervals = to_list("schedule.intervals", *v);
  if (auto v = take("schedule.window")) cfg.schedule.window = to_double("schedule.window", *v);
  if (auto v = take("schedule.target_p")) cfg.schedule.target_probability = to_double("schedule.target_p", *v);

  // [switch]
  std::optional<std::string> smode = take("switch.mode");
  if (smode) {
    SwitchMode m;
    const std::string s = lower(*smode);
    if (s == "coupling") m.kind = SwitchKind::Coupling;
    else if (s == "field") m.kind = SwitchKind::Field;
    else throw config_error("config: unknown switch mode '" + *smode + "'");
    if (auto v = take("switch.b")) m.field_strength = to_double("switch.b", *v);
    else if (cfg.chain.field_strength) m.field_strength = *cfg.chain.field_strength;
    cfg.switch_mode = m;
  }
  GreedyParams gp = GreedyParams::defaults_for(cfg.chain);
  bool has_greedy = false;
  if (auto v = take("switch.search_window")) { gp.search_window = to_double("switch.search_window", *v); has_greedy = true; }
  if (auto v = take("switch.gate_window")) { gp.gate_window = to_double("switch.gate_window", *v); has_greedy = true; }
  if (auto v = take("switch.grid_points")) { gp.grid_points = static_cast<int>(to_int("switch.grid_points", *v)); has_greedy = true; }
  if (auto v = take("switch.refine_tolerance")) { gp.refine_tolerance = to_double("switch.refine_tolerance", *v); has_greedy = true; }
  if (auto v = take("switch.gain_threshold")) { gp.gain_threshold = to_double("switch.gain_threshold", *v); has_greedy = true; }
  if (auto v = take("switch.step_budget")) { gp.step_budget = static_cast<int>(to_int("switch.step_budget", *v)); has_greedy = true; }
  if (smode || has_greedy) cfg.greedy = gp;

  // [sweep]
  if (auto v = take("sweep.axis")) {
    SweepConfig sw;
    const std::string a = lower(*v);
    if (a == "gate_count") sw.axis = SweepConfig::Axis::GateCount;
    else if (a == "seed") sw.axis = SweepConfig::Axis::Seed;
    else if (a == "b" || a == "field") sw.axis = SweepConfig::Axis::Field;
    else throw config_error("config: unknown sweep axis '" + *v + "'");
    if (auto w = take("sweep.values")) sw.values = to_list("sweep.values", *w);
    else throw config_error("config: sweep.values is required for sweeps");
    cfg.sweep = sw;
  }

  // [output] / [run]
  if (auto v = take("output.format")) {
    const std::string f = lower(*v);
    if (f == "csv") cfg.output_format = OutputFormat::Csv;
    else if (f == "json") cfg.output_format = OutputFormat::Json;
    else throw config_error("config: unknown output format '" + *v + "'");
  }
  if (auto v = take("output.stem")) cfg.output_stem = *v;
  if (auto v = take("run.seed")) cfg.seed = to_u64("run.seed", *v);
  if (auto v = take("run.single_shot_window")) cfg.single_shot_window = to_double("run.single_shot_window", *v);
  if (auto v = take("run.single_shot_grid")) cfg.single_shot_grid = to_double("run.single_shot_grid", *v);

  if (!kv.empty()) throw config_error("config: unknown key '" + kv.begin()->first + "'");
  cfg.validate();
  return cfg;
}

}  // namespace

void ExperimentConfig::validate() const {
  chain.validate();
  switch (experiment) {
    case ExperimentKind::Sweep:
      if (!sweep) throw config_error("config: sweep experiment needs a [sweep] section");
      if (sweep->values.empty()) throw config_error("config: sweep axis is empty");
      break;
    case ExperimentKind::Switched:
      if (!switch_mode) throw config_error("config: switched experiment needs switch.mode");
      switch_mode->validate();
      break;
    default:
      break;
  }
  if (experiment != ExperimentKind::Sweep && sweep)
    throw config_error("config: [sweep] section requires experiment.kind = sweep");
  if (experiment == ExperimentKind::Endgate ||
      (experiment == ExperimentKind::Sweep && sweep->axis != SweepConfig::Axis::Field)) {
    switch (schedule.mode) {
      case ScheduleConfig::Mode::Equidistant:
        if (!(schedule.total_time > 0.0) && !(schedule.tau > 0.0))
          throw config_error("config: equidistant schedule needs total_time or tau");
        if (schedule.gate_count < 1) throw config_error("config: gate_count must be >= 1");
        break;
      case ScheduleConfig::Mode::Explicit:
        if (schedule.intervals.empty())
          throw config_error("config: explicit schedule needs intervals");
        break;
      case ScheduleConfig::Mode::PeakTimed:
        if (schedule.gate_count < 1) throw config_error("config: gate_count must be >= 1");
        break;
    }
  }
  if (greedy) greedy->validate();
}

ExperimentConfig ExperimentConfig::from_ini_text(const std::string& text) {
  KvMap kv;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(lineno) + ": unterminated section");
      section = lower(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw config_error("config line " + std::to_string(lineno) + ": key outside any section");
    kv[section + "." + key] = value;
  }
  return build_from_map(std::move(kv));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  KvMap kv;
  auto scalar = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  for (const auto& [section, body] : j.items()) {
    if (body.is_object()) {
      for (const auto& [key, value] : body.items()) {
        if (value.is_array()) {
          std::string joined;
          for (const auto& item : value) {
            if (!joined.empty()) joined += ",";
            joined += scalar(item);
          }
          kv[lower(section) + "." + lower(key)] = joined;
        } else {
          kv[lower(section) + "." + lower(key)] = scalar(value);
        }
      }
    } else {
      // top-level scalars: experiment = "endgate" shorthand
      kv[lower(section) + ".kind"] = scalar(body);
    }
  }
  return build_from_map(std::move(kv));
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  const std::string body = trim(text);
  if (json || (!body.empty() && body.front() == '{')) return from_json_text(text);
  return from_ini_text(text);
}

}  // namespace endgate
