#include "endgate/protocol.hpp"

#include <cmath>

#include "endgate/optimize.hpp"

namespace endgate {

std::pair<std::optional<EndGate>, double> compute_gate(std::complex<double> a_end,
                                                       std::complex<double> a_target) {
  const double p = std::norm(a_end) + std::norm(a_target);
  if (p <= kGateEpsilon) return {std::nullopt, p};
  const double root = std::sqrt(p);
  return {EndGate{a_end / root, a_target / root}, p};
}

SectorState apply_gate(const SectorState& state, const EndGate& g, int end_index) {
  SectorState out = state;
  const std::complex<double> a_n = state(end_index);
  const std::complex<double> a_t = state(end_index + 1);
  out(end_index) = g.d * a_n - g.c * a_t;
  out(end_index + 1) = std::conj(g.c) * a_n + std::conj(g.d) * a_t;
  return out;
}

SectorState apply_gate_adjoint(const SectorState& state, const EndGate& g, int end_index) {
  SectorState out = state;
  const std::complex<double> a_n = state(end_index);
  const std::complex<double> a_t = state(end_index + 1);
  out(end_index) = std::conj(g.d) * a_n + g.c * a_t;
  out(end_index + 1) = -std::conj(g.c) * a_n + g.d * a_t;
  return out;
}

std::vector<double> equidistant_schedule(double total_time, int gates) {
  if (gates < 1) throw config_error("equidistant schedule needs at least one gate");
  if (!(total_time > 0.0)) throw config_error("equidistant schedule needs total time > 0");
  return std::vector<double>(static_cast<std::size_t>(gates), total_time / gates);
}

namespace {

void require_uncoupled_target(const SpectralPropagator& p) {
  const int t = p.target_index();
  if (p.source_matrix().row(t).cwiseAbs().maxCoeff() > 0.0)
    throw config_error("run_protocol requires a Hamiltonian that does not couple the target");
}

StepRecord fire_gate(SectorState& psi, int end, double duration) {
  auto [gate, p] = compute_gate(psi(end), psi(end + 1));
  if (gate) psi = apply_gate(psi, *gate, end);
  // rounding on a unit-norm state can push p past 1 by ~1e-16
  return StepRecord{duration, gate, std::min(1.0, p)};
}

}  // namespace

ProtocolTrace run_protocol(const SpectralPropagator& p, const std::vector<double>& intervals) {
  if (intervals.empty()) throw config_error("run_protocol: empty interval list");
  require_uncoupled_target(p);
  const int end = p.end_index();

  ProtocolTrace trace;
  trace.steps.reserve(intervals.size());
  SectorState psi = basis_state(p.dimension(), 1);
  for (double dt : intervals) {
    psi = p.evolve(psi, dt);
    trace.steps.push_back(fire_gate(psi, end, dt));
  }
  trace.final_state = std::move(psi);
  trace.final_probability = trace.steps.back().cumulative_probability;
  return trace;
}

ProtocolTrace run_protocol(const SectorHamiltonian& h, const std::vector<double>& intervals) {
  return run_protocol(SpectralPropagator::diagonalize(h), intervals);
}

ProtocolTrace run_protocol_peak_timed(const SpectralPropagator& p, const PeakTimedParams& params) {
  if (params.max_gates < 1) throw config_error("peak-timed run needs at least one gate");
  if (!(params.window > 0.0)) throw config_error("peak-timed run needs a positive window");
  require_uncoupled_target(p);
  const int end = p.end_index();

  // resolve the fastest spectral beat with at least 4 samples
  const double span = p.eigenvalues().maxCoeff() - p.eigenvalues().minCoeff();
  const int n_grid = std::max(params.grid_points,
                              static_cast<int>(std::ceil(params.window * span * (2.0 / M_PI))));
  std::vector<double> ts(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) ts[static_cast<std::size_t>(i)] = params.window * (i + 1) / n_grid;

  ProtocolTrace trace;
  SectorState psi = basis_state(p.dimension(), 1);
  for (int l = 0; l < params.max_gates; ++l) {
    const Eigen::VectorXcd amps = p.amplitude_scan(end, psi, ts);
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < n_grid; ++i) {
      const double a = std::abs(amps(i));
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    const double lo = imax > 0 ? ts[static_cast<std::size_t>(imax - 1)] : ts[0] * 0.5;
    const double hi = imax < n_grid - 1 ? ts[static_cast<std::size_t>(imax + 1)] : params.window;
    const double t = golden_section_max(
        [&](double x) { return std::abs(p.amplitude(end, psi, x)); }, lo, hi,
        params.refine_tolerance);

    psi = p.evolve(psi, t);
    trace.steps.push_back(fire_gate(psi, end, t));
    if (params.target_probability > 0.0 &&
        trace.steps.back().cumulative_probability >= params.target_probability)
      break;
  }
  trace.final_state = std::move(psi);
  trace.final_probability = trace.steps.back().cumulative_probability;
  return trace;
}

double projected_success_probability(const SpectralPropagator& p,
                                     const std::vector<double>& intervals) {
  if (intervals.empty()) throw config_error("projected probability: empty interval list");
  require_uncoupled_target(p);
  SectorState phi = basis_state(p.dimension(), 1);
  const int end = p.end_index();
  for (double dt : intervals) {
    phi = p.evolve(phi, dt);
    phi(0) = 0.0;
    phi(end) = 0.0;
    phi(end + 1) = 0.0;
  }
  return 1.0 - phi.squaredNorm();
}

SectorState transfer_qubit(std::complex<double> alpha, std::complex<double> beta,
                           const SectorHamiltonian& h, const std::vector<double>& intervals) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw config_error("transfer_qubit: (alpha, beta) must be normalized");
  const SpectralPropagator p = SpectralPropagator::diagonalize(h);
  const ProtocolTrace trace = run_protocol(p, intervals);

  SectorState psi = logical_state(p.dimension(), alpha, beta);
  const int end = p.end_index();
  for (const StepRecord& step : trace.steps) {
    psi = p.evolve(psi, step.duration);
    if (step.gate) psi = apply_gate(psi, *step.gate, end);
  }
  return psi;
}

SectorState adjoint_replay(const ProtocolTrace& trace, const SpectralPropagator& p,
                           const SectorState& start) {
  SectorState psi = start;
  const int end = p.end_index();
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    if (it->gate) psi = apply_gate_adjoint(psi, *it->gate, end);
    psi = p.evolve(psi, -it->duration);
  }
  return psi;
}

SectorState adjoint_replay(const ProtocolTrace& trace, const SpectralPropagator& p) {
  return adjoint_replay(trace, p, trace.final_state);
}

double average_fidelity(double p) {
  if (p < -1e-9 || p > 1.0 + 1e-9) throw config_error("average_fidelity: p outside [0, 1]");
  const double pc = std::min(1.0, std::max(0.0, p));
  return 0.5 + std::sqrt(pc) / 3.0 + pc / 6.0;
}

}  // namespace endgate
