#include "endgate/switched.hpp"

#include <cmath>

#include "endgate/optimize.hpp"
#include "endgate/protocol.hpp"

namespace endgate {

void SwitchMode::validate() const {
  if (kind == SwitchKind::Field && !(field_strength > 0.0))
    throw config_error("field mode requires B > 0");
}

GreedyParams GreedyParams::defaults_for(const ChainSpec& spec) {
  GreedyParams p;
  p.search_window = 4.0 * spec.n_sites / spec.base_coupling;
  p.refine_tolerance = 1e-4 / spec.base_coupling;
  return p;
}

void GreedyParams::validate() const {
  if (!(search_window > 0.0) || grid_points < 2 || !(refine_tolerance > 0.0) ||
      !(gain_threshold > 0.0) || step_budget < 1)
    throw config_error("greedy parameters must be positive");
  if (!(refine_tolerance < search_window / grid_points))
    throw config_error("refine tolerance must be below the grid spacing");
  if (gate_window < 0.0) throw config_error("gate window must be >= 0");
}

double SegmentPlan::total_time() const {
  double t = 0.0;
  for (const Segment& s : segments) t += s.duration;
  return t;
}

SectorHamiltonian build_switched(const ChainSpec& spec, const SwitchMode& mode, bool delta_on) {
  spec.validate();
  mode.validate();
  if (spec.coupling_model != CouplingModel::Xy)
    throw config_error("switched protocols are defined for XY chains");

  if (mode.kind == SwitchKind::Coupling) {
    SectorHamiltonian h = build_xy(spec, delta_on);
    if (spec.disorder && spec.disorder->relative_amplitude > 0.0)
      return apply_disorder(h, *spec.disorder);
    return h;
  }

  // field mode: target permanently coupled; delta_on detunes it by 2B
  SectorHamiltonian h = build_xy(spec, true);
  if (spec.disorder && spec.disorder->relative_amplitude > 0.0)
    h = apply_disorder(h, *spec.disorder);
  Eigen::MatrixXcd m = h.matrix();
  if (delta_on) m(h.target_index(), h.target_index()) = 2.0 * mode.field_strength;
  return SectorHamiltonian(std::move(m), spec.n_sites, true);
}

namespace {

struct Scan {
  std::vector<double> times;
  Eigen::VectorXcd amps;
};

// at least 4 samples per fastest spectral beat, so narrow resonances
// (field mode: detuning 2B) are not aliased
int scan_size(const SpectralPropagator& p, double window, int grid_points) {
  const double span = p.eigenvalues().maxCoeff() - p.eigenvalues().minCoeff();
  return std::max(grid_points, static_cast<int>(std::ceil(window * span * (2.0 / M_PI))));
}

Scan scan_amplitude(const SectorState& state, const SpectralPropagator& p, int row, double window,
                    int grid_points) {
  const int n = scan_size(p, window, grid_points);
  Scan s;
  s.times.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s.times[static_cast<std::size_t>(i)] = window * (i + 1) / n;
  s.amps = p.amplitude_scan(row, state, s.times);
  return s;
}

PeakResult refine_peak(const SectorState& state, const SpectralPropagator& p, int row,
                       const Scan& s, int index, double window, double tol) {
  const int n = static_cast<int>(s.times.size());
  const double lo = index > 0 ? s.times[static_cast<std::size_t>(index - 1)] : s.times[0] * 0.5;
  const double hi = index < n - 1 ? s.times[static_cast<std::size_t>(index + 1)] : window;
  const double t = golden_section_max(
      [&](double x) { return std::abs(p.amplitude(row, state, x)); }, lo, hi, tol);
  return PeakResult{t, p.amplitude(row, state, t)};
}

int argmax_abs(const Eigen::VectorXcd& v) {
  int imax = 0;
  double amax = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  return imax;
}

}  // namespace

PeakResult find_next_peak(const SectorState& state, const SpectralPropagator& frozen,
                          const GreedyParams& params) {
  params.validate();
  const int row = frozen.end_index();
  const Scan s = scan_amplitude(state, frozen, row, params.search_window, params.grid_points);
  const int imax = argmax_abs(s.amps);
  PeakResult peak =
      refine_peak(state, frozen, row, s, imax, params.search_window, params.refine_tolerance);
  if (std::norm(peak.amplitude) <= kGateEpsilon)
    throw numerical_error("find_next_peak: no amplitude reaches site N within the window");
  return peak;
}

PeakResult next_prominent_peak(const SectorState& state, const SpectralPropagator& frozen,
                               const GreedyParams& params, double prominence) {
  params.validate();
  const int row = frozen.end_index();
  const Scan s = scan_amplitude(state, frozen, row, params.search_window, params.grid_points);
  const int n = static_cast<int>(s.times.size());
  double floor = 0.0;
  for (int i = 0; i < n; ++i) floor = std::max(floor, std::abs(s.amps(i)));
  floor *= prominence;
  for (int i = 1; i + 1 < n; ++i) {
    const double a = std::abs(s.amps(i));
    if (a >= std::abs(s.amps(i - 1)) && a >= std::abs(s.amps(i + 1)) && a >= floor)
      return refine_peak(state, frozen, row, s, i, params.search_window, params.refine_tolerance);
  }
  return refine_peak(state, frozen, row, s, argmax_abs(s.amps), params.search_window,
                     params.refine_tolerance);
}

SwitchInterval optimize_switch_interval(const SectorState& state, const SpectralPropagator& gate,
                                        const GreedyParams& params) {
  params.validate();
  const int row = gate.target_index();
  const double window = params.gate_window > 0.0 ? params.gate_window : params.search_window;
  const Scan s = scan_amplitude(state, gate, row, window, params.grid_points);
  const int imax = argmax_abs(s.amps);
  const PeakResult peak =
      refine_peak(state, gate, row, s, imax, window, params.refine_tolerance);
  const double now = std::norm(state(row));
  return SwitchInterval{peak.time, std::norm(peak.amplitude) - now};
}

namespace {

// consecutive cycles without net gain above gain_threshold before the run is
// declared saturated; generous because the skip rule needs room to realign
// phases (see greedy_run doc)
constexpr int kStallLimit = 40;

SegmentPlan greedy_loop(const SpectralPropagator& frozen, const SpectralPropagator& gate,
                        const GreedyParams& params, double quadrature_offset, bool frozen_delta,
                        bool gate_delta) {
  const int dim = frozen.dimension();
  const int target = frozen.target_index();

  SegmentPlan plan;
  SectorState psi = basis_state(dim, 1);
  bool skipping = false;
  int stall = 0;
  while (plan.cycles < params.step_budget) {
    ++plan.cycles;
    const double p_before = std::norm(psi(target));

    PeakResult peak = skipping ? next_prominent_peak(psi, frozen, params)
                               : find_next_peak(psi, frozen, params);
    const double dt = peak.time + quadrature_offset;
    psi = frozen.evolve(psi, dt);
    plan.segments.push_back(Segment{dt, frozen_delta, std::min(1.0, std::norm(psi(target)))});

    const SwitchInterval trial = optimize_switch_interval(psi, gate, params);
    if (trial.gain > params.gain_threshold) {
      psi = gate.evolve(psi, trial.duration);
      plan.segments.push_back(
          Segment{trial.duration, gate_delta, std::min(1.0, std::norm(psi(target)))});
      skipping = false;
    } else {
      ++plan.skipped_trials;
      skipping = true;
    }

    const double p_after = std::norm(psi(target));
    if (1.0 - p_after <= params.gain_threshold) break;
    stall = (p_after - p_before) <= params.gain_threshold ? stall + 1 : 0;
    if (stall >= kStallLimit) break;
  }
  plan.final_state = std::move(psi);
  plan.final_probability = std::min(1.0, std::norm(plan.final_state(target)));
  return plan;
}

}  // namespace

SegmentPlan greedy_run(const ChainSpec& spec, const SwitchMode& mode, const GreedyParams& params) {
  params.validate();
  const SectorHamiltonian h_frozen = build_switched(spec, mode, mode.frozen_delta());
  const SectorHamiltonian h_gate = build_switched(spec, mode, mode.gate_delta());
  // field mode: switch a quarter detuning period past the amplitude peak;
  // at the peak itself the bond-exchange phase is at its turning point and
  // every trial gate stalls
  const double quad =
      mode.kind == SwitchKind::Field ? M_PI / (4.0 * mode.field_strength) : 0.0;
  SegmentPlan plan = greedy_loop(SpectralPropagator::diagonalize(h_frozen),
                                 SpectralPropagator::diagonalize(h_gate), params, quad,
                                 mode.frozen_delta(), mode.gate_delta());
  plan.spec = spec;
  plan.mode = mode;
  return plan;
}

SegmentPlan greedy_run_with(const SectorHamiltonian& frozen, const SectorHamiltonian& gate,
                            const GreedyParams& params, double quadrature_offset) {
  params.validate();
  return greedy_loop(SpectralPropagator::diagonalize(frozen),
                     SpectralPropagator::diagonalize(gate), params, quadrature_offset, false,
                     true);
}

}  // namespace endgate
