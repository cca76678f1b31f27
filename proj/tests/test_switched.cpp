#include <doctest.h>

#include <cmath>

#include "endgate/chain.hpp"
#include "endgate/propagator.hpp"
#include "endgate/protocol.hpp"
#include "endgate/switched.hpp"

using namespace endgate;

namespace {

ChainSpec xy_spec(int n) {
  ChainSpec s;
  s.n_sites = n;
  return s;
}

const SwitchMode kCoupling{SwitchKind::Coupling, 0.0};

GreedyParams params_for(int n, double window = 0.0) {
  GreedyParams p = GreedyParams::defaults_for(xy_spec(n));
  if (window > 0.0) p.search_window = window;
  return p;
}

}  // namespace

TEST_CASE("build_switched: coupling mode off equals the bare XY chain") {
  const SectorHamiltonian plain = build_xy(xy_spec(5), false);
  const SectorHamiltonian off = build_switched(xy_spec(5), kCoupling, false);
  CHECK((plain.matrix() - off.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_switched: coupling mode on adds the end bond") {
  const SectorHamiltonian on = build_switched(xy_spec(2), kCoupling, true);
  CHECK(on.matrix()(2, 3) == std::complex<double>(1.0));
  CHECK(on.matrix()(3, 2) == std::complex<double>(1.0));
}

TEST_CASE("build_switched: field mode keeps the bond and detunes the target by 2B") {
  const SwitchMode field{SwitchKind::Field, 20.0};
  const SectorHamiltonian off = build_switched(xy_spec(4), field, false);
  const SectorHamiltonian on = build_switched(xy_spec(4), field, true);
  CHECK(off.matrix()(4, 5) == std::complex<double>(1.0));  // permanently coupled
  CHECK(off.matrix()(5, 5) == std::complex<double>(0.0));
  CHECK(on.matrix()(5, 5) == std::complex<double>(40.0));
  CHECK((on.matrix() - off.matrix()).cwiseAbs().maxCoeff() == 40.0);
  CHECK(on.matrix().col(0).cwiseAbs().maxCoeff() == 0.0);  // H|0> = 0 still
}

TEST_CASE("build_switched rejects field mode without B and non-XY chains") {
  CHECK_THROWS_AS(build_switched(xy_spec(4), SwitchMode{SwitchKind::Field, 0.0}, true),
                  config_error);
  ChainSpec heis = xy_spec(4);
  heis.coupling_model = CouplingModel::Heisenberg;
  CHECK_THROWS_AS(build_switched(heis, kCoupling, true), config_error);
}

TEST_CASE("find_next_peak: N=2 two-site Rabi peaks at pi/2 with unit amplitude") {
  const SpectralPropagator frozen =
      SpectralPropagator::diagonalize(build_switched(xy_spec(2), kCoupling, false));
  GreedyParams params = params_for(2, 2.0 * M_PI);
  const PeakResult peak = find_next_peak(basis_state(4, 1), frozen, params);
  CHECK(std::abs(peak.time - M_PI / 2.0) <= 2.0 * params.refine_tolerance);
  CHECK(std::abs(std::abs(peak.amplitude) - 1.0) <= 1e-8);
}

TEST_CASE("find_next_peak signals when no amplitude can reach site N") {
  const SpectralPropagator frozen =
      SpectralPropagator::diagonalize(build_switched(xy_spec(4), kCoupling, false));
  CHECK_THROWS_AS(find_next_peak(basis_state(6, 0), frozen, params_for(4)), numerical_error);
}

TEST_CASE("find_next_peak: N=20 window maximum matches the dense-grid oracle") {
  const SpectralPropagator frozen =
      SpectralPropagator::diagonalize(build_switched(xy_spec(20), kCoupling, false));
  const SectorState one = basis_state(22, 1);
  const PeakResult peak = find_next_peak(one, frozen, params_for(20, 40.0));

  // oracle: dense scan at 4x the optimizer's resolution
  double best = 0.0, best_t = 0.0;
  for (int i = 1; i <= 80000; ++i) {
    const double t = 40.0 * i / 80000.0;
    const double a = std::abs(frozen.amplitude(20, one, t));
    if (a > best) {
      best = a;
      best_t = t;
    }
  }
  CHECK(std::abs(peak.time - best_t) <= 1e-3);
  CHECK(std::norm(peak.amplitude) >= std::norm(best) - 1e-6);
  // the arrival peak of the uniform N=20 chain carries p = 0.632
  CHECK(std::norm(peak.amplitude) == doctest::Approx(0.632).epsilon(5e-3));
  CHECK(peak.time == doctest::Approx(11.396).epsilon(1e-3));
}

TEST_CASE("optimize_switch_interval: N=2 from site N, three-site closed form") {
  // with the chain bond always on, |<3|U(d)|2>|^2 = sin^2(sqrt(2) J d) / 2:
  // best gain 1/2 at sqrt(2) d = pi/2 mod pi
  const SpectralPropagator gate =
      SpectralPropagator::diagonalize(build_switched(xy_spec(2), kCoupling, true));
  GreedyParams params = params_for(2, 8.0);
  const SwitchInterval best = optimize_switch_interval(basis_state(4, 2), gate, params);
  CHECK(std::abs(best.gain - 0.5) <= 1e-6);
  CHECK(std::abs(std::sin(std::sqrt(2.0) * best.duration)) >= 1.0 - 1e-6);
}

TEST_CASE("optimize_switch_interval: from the target itself the gain is non-positive") {
  const SpectralPropagator gate =
      SpectralPropagator::diagonalize(build_switched(xy_spec(6), kCoupling, true));
  const SwitchInterval best = optimize_switch_interval(basis_state(8, 7), gate, params_for(6));
  CHECK(best.gain <= 1e-12);
}

TEST_CASE("greedy N=2 coupling reaches 1 - 1e-6 within a few accepted gates") {
  GreedyParams params = params_for(2, 8.0);
  params.gain_threshold = 1e-8;
  params.step_budget = 60;
  const SegmentPlan plan = greedy_run(xy_spec(2), kCoupling, params);
  CHECK(plan.final_probability >= 1.0 - 1e-6);
  int accepted = 0;
  for (const Segment& s : plan.segments)
    if (s.delta_on) ++accepted;
  CHECK(accepted <= 8);  // closed-form cascade: 0.5, 0.933, 0.9989, ... (5 gates)
}

TEST_CASE("greedy plans conserve the norm and record monotone accepted probabilities") {
  GreedyParams params = params_for(8);
  params.step_budget = 25;
  const SegmentPlan plan = greedy_run(xy_spec(8), kCoupling, params);
  CHECK(std::abs(plan.final_state.norm() - 1.0) <= 1e-9);
  double before = 0.0;
  for (const Segment& s : plan.segments) {
    if (s.delta_on) CHECK(s.target_probability >= before - 1e-12);
    before = s.target_probability;
  }
  CHECK(plan.final_probability == doctest::Approx(std::norm(plan.final_state(9))));
}

TEST_CASE("coupling-mode frozen segments hold the target amplitude exactly") {
  GreedyParams params = params_for(6);
  params.step_budget = 12;
  const SegmentPlan plan = greedy_run(xy_spec(6), kCoupling, params);
  double after_gate = 0.0;
  for (const Segment& s : plan.segments) {
    if (!s.delta_on) CHECK(std::abs(s.target_probability - after_gate) <= 1e-12);
    after_gate = s.target_probability;
  }
  CHECK(plan.final_probability > 0.9);
}

TEST_CASE("field-mode frozen leakage: two-level closed form and simulated segments") {
  // isolated two-site reduction (hopping J, detuning 2B): max population
  // transferred away from the target is J^2 / (J^2 + B^2)
  const double b = 20.0;
  Eigen::MatrixXcd two = Eigen::MatrixXcd::Zero(4, 4);
  two(1, 2) = two(2, 1) = 1.0;
  two(2, 2) = 2.0 * b;
  const SpectralPropagator p2 =
      SpectralPropagator::diagonalize(SectorHamiltonian(two, 2, true));
  double worst = 0.0;
  for (double t = 0.001; t <= 2.0; t += 0.001)
    worst = std::max(worst, 1.0 - std::norm(p2.evolve(basis_state(4, 2), t)(2)));
  const double closed_form = 1.0 / (1.0 + b * b);
  CHECK(std::abs(worst - closed_form) <= 1e-4);
  CHECK(closed_form == doctest::Approx(2.494e-3).epsilon(1e-3));

  // full chain: per-frozen-segment target drops stay within a few times the
  // two-level bound once the chain feeds site N as well
  ChainSpec spec = xy_spec(20);
  const SwitchMode field{SwitchKind::Field, b};
  GreedyParams params = params_for(20);
  params.step_budget = 40;
  const SegmentPlan plan = greedy_run(spec, field, params);
  double prev = 0.0;
  double worst_drop = 0.0;
  for (const Segment& s : plan.segments) {
    if (s.delta_on) worst_drop = std::max(worst_drop, prev - s.target_probability);
    prev = s.target_probability;
  }
  CHECK(worst_drop <= 8.0 * closed_form);
}

TEST_CASE("paired gains: field-mode frozen phase costs the first-cycle gate") {
  // identical gate Hamiltonians, so any gap comes from the frozen phase
  const int n = 20;
  GreedyParams params = params_for(n);
  const SwitchMode field{SwitchKind::Field, 20.0};

  const SpectralPropagator frozen_c =
      SpectralPropagator::diagonalize(build_switched(xy_spec(n), kCoupling, false));
  const SpectralPropagator frozen_f =
      SpectralPropagator::diagonalize(build_switched(xy_spec(n), field, true));
  const SpectralPropagator gate_c =
      SpectralPropagator::diagonalize(build_switched(xy_spec(n), kCoupling, true));
  const SpectralPropagator gate_f =
      SpectralPropagator::diagonalize(build_switched(xy_spec(n), field, false));

  const SectorState one = basis_state(n + 2, 1);
  const PeakResult peak_c = find_next_peak(one, frozen_c, params);
  const PeakResult peak_f = find_next_peak(one, frozen_f, params);
  const SectorState at_peak_c = frozen_c.evolve(one, peak_c.time);
  const SectorState at_peak_f =
      frozen_f.evolve(one, peak_f.time + M_PI / (4.0 * field.field_strength));
  const double gain_c = optimize_switch_interval(at_peak_c, gate_c, params).gain;
  const double gain_f = optimize_switch_interval(at_peak_f, gate_f, params).gain;
  CHECK(gain_f < gain_c);
}

TEST_CASE("strong end bond with short gates reproduces the instantaneous protocol") {
  const int n = 20;
  const double bond = 100.0;
  const SectorHamiltonian frozen = build_switched(xy_spec(n), kCoupling, false);
  Eigen::MatrixXcd strong = build_switched(xy_spec(n), kCoupling, true).matrix();
  strong(n, n + 1) = bond;
  strong(n + 1, n) = bond;
  const SectorHamiltonian gate(strong, n, true);

  GreedyParams params = params_for(n);
  params.step_budget = 25;
  params.gate_window = M_PI / bond;  // one Rabi period of the fast bond
  const SegmentPlan plan = greedy_run_with(frozen, gate, params, 0.0);

  // instantaneous protocol over the same cycle durations (frozen + gate)
  std::vector<double> intervals;
  std::vector<double> greedy_ps;
  double pending = 0.0;
  for (const Segment& s : plan.segments) {
    if (!s.delta_on) {
      pending = s.duration;
    } else {
      intervals.push_back(pending + s.duration);
      greedy_ps.push_back(s.target_probability);
    }
  }
  REQUIRE(intervals.size() >= 10);
  const ProtocolTrace inst = run_protocol(build_xy(xy_spec(n), false), intervals);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    CHECK(std::abs(greedy_ps[i] - inst.steps[i].cumulative_probability) <= 0.02);
  }
}

TEST_CASE("field mode saturates: run stalls below 1 once leakage offsets the gates") {
  ChainSpec spec = xy_spec(10);
  GreedyParams params = GreedyParams::defaults_for(spec);
  params.step_budget = 120;
  const SegmentPlan plan = greedy_run(spec, SwitchMode{SwitchKind::Field, 20.0}, params);
  CHECK(plan.final_probability > 0.9);
  // saturation stop, not convergence and not the budget: the trailing cycles
  // each gained less than gain_threshold
  CHECK(plan.final_probability < 1.0 - params.gain_threshold);
  CHECK(plan.cycles < params.step_budget);
  CHECK(plan.skipped_trials >= 40);
}

TEST_CASE("greedy rejects invalid parameters") {
  GreedyParams params = params_for(4);
  params.grid_points = 0;
  CHECK_THROWS_AS(greedy_run(xy_spec(4), kCoupling, params), config_error);
  GreedyParams coarse = params_for(4);
  coarse.refine_tolerance = coarse.search_window;  // not below grid spacing
  CHECK_THROWS_AS(greedy_run(xy_spec(4), kCoupling, coarse), config_error);
}
