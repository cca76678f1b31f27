#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "endgate/chain.hpp"
#include "endgate/state.hpp"

namespace endgate {

/// Spectral decomposition of a SectorHamiltonian, used for exact unitary
/// evolution: U(t) = V diag(exp(-i lambda t)) V^dagger.
///
/// Eigenvalues are ascending; each eigenvector's largest-magnitude component
/// is made real positive so the decomposition is deterministic.
class SpectralPropagator {
public:
  /// Throws numerical_error if h deviates from Hermiticity beyond 1e-10.
  static SpectralPropagator diagonalize(const SectorHamiltonian& h);

  int dimension() const { return static_cast<int>(eigenvalues_.size()); }
  int n_sites() const { return n_sites_; }
  int end_index() const { return n_sites_; }
  int target_index() const { return n_sites_ + 1; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
  const Eigen::MatrixXcd& source_matrix() const { return source_; }

  /// V diag(lambda) V^dagger, for reconstruction checks.
  Eigen::MatrixXcd reconstruct() const;

  /// U(t) |state>; norm preserved, t may be negative (adjoint replay).
  SectorState evolve(const SectorState& state, double t) const;

  /// <row| U(t) |state>.
  std::complex<double> amplitude(int row, const SectorState& state, double t) const;

  /// <row| U(t_i) |state> for many times at O(n) per time after an O(n^2)
  /// change of basis; backbone of every peak scan.
  Eigen::VectorXcd amplitude_scan(int row, const SectorState& state,
                                  const std::vector<double>& times) const;

  /// <N| U(t) |1>, the single-shot transfer amplitude.
  std::complex<double> transfer_amplitude(double t) const;

private:
  SpectralPropagator() = default;

  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  Eigen::MatrixXcd source_;
  int n_sites_ = 0;
};

}  // namespace endgate
