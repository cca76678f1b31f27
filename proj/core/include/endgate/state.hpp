#pragma once

#include <complex>

#include <Eigen/Dense>

namespace endgate {

/// Normalized amplitude vector over the sector basis |0>, ..., |N+1>.
using SectorState = Eigen::VectorXcd;

/// Basis state |index> in a sector of the given dimension.
inline SectorState basis_state(int dimension, int index) {
  SectorState s = SectorState::Zero(dimension);
  s(index) = 1.0;
  return s;
}

/// alpha|0> + beta|1>, the logical input of the transfer protocol.
inline SectorState logical_state(int dimension, std::complex<double> alpha,
                                 std::complex<double> beta) {
  SectorState s = SectorState::Zero(dimension);
  s(0) = alpha;
  s(1) = beta;
  return s;
}

}  // namespace endgate
