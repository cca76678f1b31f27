#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "endgate/chain.hpp"
#include "endgate/propagator.hpp"
#include "endgate/state.hpp"

namespace endgate {

enum class SwitchKind { Coupling, Field };

/// Which end control is switchable. Coupling: the N <-> N+1 bond itself
/// (frozen phase = bond off). Field: the target is permanently coupled and a
/// strong field B >> J detunes it (frozen phase = field on).
struct SwitchMode {
  SwitchKind kind = SwitchKind::Coupling;
  double field_strength = 0.0;  // B, required for Field

  void validate() const;
  bool frozen_delta() const { return kind == SwitchKind::Field; }
  bool gate_delta() const { return kind == SwitchKind::Coupling; }
};

/// Free parameters of the greedy time optimizer.
struct GreedyParams {
  double search_window = 80.0;    // free-evolution lookahead, units 1/J
  int grid_points = 2048;         // coarse scan resolution (grown to resolve the spectrum)
  double refine_tolerance = 1e-4; // golden-section stop, units 1/J
  double gain_threshold = 1e-4;   // epsilon_gain: minimum accepted probability gain
  int step_budget = 200;          // max greedy cycles
  double gate_window = 0.0;       // gate-interval search window; 0 = search_window

  static GreedyParams defaults_for(const ChainSpec& spec);
  void validate() const;
};

struct Segment {
  double duration = 0.0;
  bool delta_on = false;
  double target_probability = 0.0;  // |a_{N+1}|^2 after this segment
};

/// Realized Delta(t) waveform plus bookkeeping of a greedy run.
struct SegmentPlan {
  ChainSpec spec;
  SwitchMode mode;
  std::vector<Segment> segments;
  SectorState final_state;
  double final_probability = 0.0;
  int cycles = 0;
  int skipped_trials = 0;

  double total_time() const;
};

/// Piecewise-constant Hamiltonian of the switched protocol (XY only).
/// Coupling mode: chain bonds 1..N-1 plus the end bond iff delta_on.
/// Field mode: chain bonds 1..N always; delta_on adds 2B to the target's
/// diagonal (sector-relative shift of B sigma^z_{N+1}; uniform offsets dropped).
SectorHamiltonian build_switched(const ChainSpec& spec, const SwitchMode& mode, bool delta_on);

/// Global maximum of |<N| U(t) |state>| over (0, window], grid scan plus
/// golden-section refinement; throws numerical_error when no amplitude ever
/// reaches site N (max squared below kGateEpsilon).
struct PeakResult {
  double time = 0.0;
  std::complex<double> amplitude;
};
PeakResult find_next_peak(const SectorState& state, const SpectralPropagator& frozen,
                          const GreedyParams& params);

/// First local maximum of |<N| U(t) |state>| at or above `prominence` times
/// the window maximum; the skip-rule advance ("evolved to the next amplitude
/// maximum"). Falls back to the global maximum when no local peak qualifies.
PeakResult next_prominent_peak(const SectorState& state, const SpectralPropagator& frozen,
                               const GreedyParams& params, double prominence = 0.5);

/// Best switch-on duration: maximizes |<N+1| U(d) |state>|^2 over
/// (0, gate window]; gain is that maximum minus the current target
/// probability and may be <= 0 (phases wrong -> caller skips).
struct SwitchInterval {
  double duration = 0.0;
  double gain = 0.0;
};
SwitchInterval optimize_switch_interval(const SectorState& state, const SpectralPropagator& gate,
                                        const GreedyParams& params);

/// Greedy run from |1>: frozen-phase evolution to the next site-N peak, then
/// a trial gate interval, accepted iff gain > gain_threshold, else skipped
/// (next trial starts from the next prominent peak). Stops at step_budget,
/// at 1 - p <= gain_threshold, or after 40 consecutive cycles without net
/// gain above gain_threshold (saturation).
///
/// In field mode the switch point is a quarter detuning period, pi/(4B),
/// past the amplitude peak: at the peak itself the bond-exchange phase sits
/// at its turning point and the gate cannot extract anything; a quarter
/// period later amplitude and inflow phase are in quadrature.
SegmentPlan greedy_run(const ChainSpec& spec, const SwitchMode& mode, const GreedyParams& params);

/// Same loop on caller-supplied frozen/gate Hamiltonians (used by the
/// strong-coupling limit tests); quadrature_offset is added to every frozen
/// segment.
SegmentPlan greedy_run_with(const SectorHamiltonian& frozen, const SectorHamiltonian& gate,
                            const GreedyParams& params, double quadrature_offset);

}  // namespace endgate
