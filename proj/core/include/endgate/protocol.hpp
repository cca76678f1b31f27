#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "endgate/chain.hpp"
#include "endgate/propagator.hpp"
#include "endgate/state.hpp"

namespace endgate {

/// Probability threshold below which a gate is undefined and skipped
/// (identity applied); consistent with the W_k -> identity limit.
inline constexpr double kGateEpsilon = 1e-14;

/// The two-qubit end gate W(c, d) acting on chain site N and the target:
/// on the (a_N, a_T) amplitude pair,
///   a_N -> d a_N - c a_T,   a_T -> c* a_N + d* a_T,
/// all other amplitudes untouched (W P = P, W|0> = |0>).
struct EndGate {
  std::complex<double> c;
  std::complex<double> d;

  double normalization_defect() const { return std::abs(std::norm(c) + std::norm(d) - 1.0); }
};

/// One protocol step: free evolution over `duration`, then `gate` (or identity
/// when absent). cumulative_probability is p_k = |a_N|^2 + |a_T|^2 just before
/// the gate, i.e. the success probability after the gate fires.
struct StepRecord {
  double duration = 0.0;
  std::optional<EndGate> gate;
  double cumulative_probability = 0.0;

  bool gate_applied() const { return gate.has_value(); }
};

/// Complete record of a run; replayable, immutable once built.
struct ProtocolTrace {
  std::vector<StepRecord> steps;
  SectorState final_state;
  double final_probability = 0.0;  // p_l of the last step
  std::optional<ChainSpec> spec;   // attached by experiment runners

  double residual() const { return 1.0 - final_probability; }
};

/// Gate from the current end amplitudes: p = |a_N|^2 + |a_T|^2; for p above
/// kGateEpsilon, c = a_N / sqrt(p) and d = a_T / sqrt(p), which leaves the
/// post-gate target amplitude exactly sqrt(p) real nonnegative. Below the
/// threshold W is undefined and no gate is returned.
std::pair<std::optional<EndGate>, double> compute_gate(std::complex<double> a_end,
                                                       std::complex<double> a_target);

/// Applies W(c, d) to the last two amplitudes of `state` in place-free form.
SectorState apply_gate(const SectorState& state, const EndGate& g, int end_index);

/// Applies the inverse gate W(c, d)^dagger.
SectorState apply_gate_adjoint(const SectorState& state, const EndGate& g, int end_index);

/// l equal intervals of length T / l; rejects l = 0 or T <= 0.
std::vector<double> equidistant_schedule(double total_time, int gates);

/// Runs the end-gate protocol from |1>: alternately evolve over each interval
/// and fire the computed gate. Requires an uncoupled target. p_k is
/// non-decreasing; the final target amplitude is real nonnegative.
ProtocolTrace run_protocol(const SpectralPropagator& p, const std::vector<double>& intervals);
ProtocolTrace run_protocol(const SectorHamiltonian& h, const std::vector<double>& intervals);

/// Parameters for the peak-timed scheduler: each interval is the time of the
/// next |<N| U(t) |state>| maximum within `window`, found by grid scan plus
/// golden-section refinement. Schedule is still fixed a priori by H.
struct PeakTimedParams {
  int max_gates = 200;
  double window = 40.0;         // lookahead per step, units 1/J
  double target_probability = 0.0;  // stop early once p_k reaches this (0 = never)
  int grid_points = 2048;
  double refine_tolerance = 1e-6;
};

ProtocolTrace run_protocol_peak_timed(const SpectralPropagator& p, const PeakTimedParams& params);

/// p_l via the projector-product formula 1 - ||(prod P U_k)|1>||^2 with
/// P = 1 - |0><0| - |N><N| - |N+1><N+1|; never constructs gates. Used as the
/// independent route cross-checking run_protocol.
double projected_success_probability(const SpectralPropagator& p,
                                     const std::vector<double>& intervals);

/// Runs the gate sequence of a completed trace on alpha|0> + beta|1>.
/// Rejects unnormalized (alpha, beta). By linearity the result is
/// alpha|0> + beta * (final state of the |1> run).
SectorState transfer_qubit(std::complex<double> alpha, std::complex<double> beta,
                           const SectorHamiltonian& h, const std::vector<double>& intervals);

/// Replays a trace on `start` (defaults to the trace's own final state) with
/// all (U_k, W_k) inverted in reverse order; the trace's own final state maps
/// back to |1> up to numerical error.
SectorState adjoint_replay(const ProtocolTrace& trace, const SpectralPropagator& p);
SectorState adjoint_replay(const ProtocolTrace& trace, const SpectralPropagator& p,
                           const SectorState& start);

/// Average fidelity of the phase-corrected transfer channel with success
/// probability p: F = 1/2 + sqrt(p)/3 + p/6. Rejects p outside [0, 1]
/// (inputs within 1e-9 of the interval are clamped).
double average_fidelity(double p);

}  // namespace endgate
