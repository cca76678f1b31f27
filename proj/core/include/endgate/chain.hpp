#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace endgate {

/// Raised for invalid user input (chain specs, configs, CLI arguments).
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical contract is violated (Hermiticity, normalization,
/// amplitude below threshold where some is required).
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class CouplingModel { Xy, Heisenberg, Engineered };

std::string to_string(CouplingModel m);
CouplingModel coupling_model_from_string(const std::string& s);

/// Multiplicative disorder on the chain hoppings: J_n -> J_n (1 + delta_n),
/// delta_n i.i.d. uniform on [-sigma, sigma] from a seeded generator.
struct DisorderSpec {
  double relative_amplitude = 0.0;  // sigma in [0, 1)
  std::uint64_t seed = 0;
};

/// Static description of a chain: N qubits 1..N plus a target qubit N+1.
/// Energies are in units of J, times in 1/J (hbar = 1).
struct ChainSpec {
  int n_sites = 1;  // N, chain qubits excluding the target
  CouplingModel coupling_model = CouplingModel::Xy;
  double base_coupling = 1.0;  // J > 0
  std::optional<DisorderSpec> disorder;
  std::optional<double> field_strength;  // B >= 0, used by switched field mode

  /// Throws config_error if any invariant is violated.
  void validate() const;
};

/// Hermitian Hamiltonian on the single-excitation sector, basis
/// |0>, |1>, ..., |N+1> (dimension N+2). Row/column 0 is identically zero
/// (H|0> = 0); row/column N+1 is zero unless the target is coupled.
class SectorHamiltonian {
public:
  SectorHamiltonian(Eigen::MatrixXcd matrix, int n_sites, bool couples_target);

  int n_sites() const { return n_sites_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  int site_index(int n) const { return n; }  // basis |n> lives at row n
  int end_index() const { return n_sites_; }
  int target_index() const { return n_sites_ + 1; }
  bool couples_target() const { return couples_target_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// Max-norm Hermiticity defect, exactly 0 for the builders here.
  double hermiticity_defect() const;

private:
  Eigen::MatrixXcd matrix_;
  int n_sites_;
  bool couples_target_;
};

/// Uniform XY chain: hopping <n+1|H|n> = J for n = 1..N-1, zero diagonal;
/// couple_target adds the N <-> N+1 bond of strength J.
SectorHamiltonian build_xy(const ChainSpec& spec, bool couple_target);

/// Heisenberg chain, convention H = J sum sigma.sigma shifted so H|0> = 0:
/// hopping 2J, diagonal -2J deg(n) with deg(n) the number of active bonds
/// touching site n.
SectorHamiltonian build_heisenberg(const ChainSpec& spec, bool couple_target);

/// Perfect-state-transfer profile J_n = J sqrt(n(N-n)); requires N >= 2.
/// couple_target adds a plain N <-> N+1 bond of strength J.
SectorHamiltonian build_engineered(const ChainSpec& spec, bool couple_target);

/// Dispatch on spec.coupling_model; applies spec.disorder when present.
SectorHamiltonian build_sector(const ChainSpec& spec, bool couple_target);

/// Replaces each chain hopping J_n (bonds 1..N-1) by J_n (1 + delta_n).
/// Deterministic for a fixed seed; diagonal untouched; rejects sigma >= 1.
SectorHamiltonian apply_disorder(const SectorHamiltonian& h, const DisorderSpec& d);

}  // namespace endgate
