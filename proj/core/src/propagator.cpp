#include "endgate/propagator.hpp"

#include <Eigen/Eigenvalues>

namespace endgate {

SpectralPropagator SpectralPropagator::diagonalize(const SectorHamiltonian& h) {
  if (h.hermiticity_defect() > 1e-10)
    throw numerical_error("diagonalize: Hermiticity defect above 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
  if (solver.info() != Eigen::Success)
    throw numerical_error("diagonalize: eigensolver failed to converge");

  SpectralPropagator p;
  p.eigenvalues_ = solver.eigenvalues();  // ascending
  p.eigenvectors_ = solver.eigenvectors();
  p.source_ = h.matrix();
  p.n_sites_ = h.n_sites();

  // fixed phase convention: largest-magnitude component real positive
  const int d = p.dimension();
  for (int col = 0; col < d; ++col) {
    int imax = 0;
    double amax = -1.0;
    for (int row = 0; row < d; ++row) {
      const double a = std::abs(p.eigenvectors_(row, col));
      if (a > amax) {
        amax = a;
        imax = row;
      }
    }
    const std::complex<double> v = p.eigenvectors_(imax, col);
    if (amax > 0.0) p.eigenvectors_.col(col) *= std::conj(v) / amax;
  }
  return p;
}

Eigen::MatrixXcd SpectralPropagator::reconstruct() const {
  return eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint();
}

SectorState SpectralPropagator::evolve(const SectorState& state, double t) const {
  Eigen::VectorXcd w = eigenvectors_.adjoint() * state;
  const std::complex<double> minus_i(0.0, -1.0);
  for (int k = 0; k < w.size(); ++k) w(k) *= std::exp(minus_i * eigenvalues_(k) * t);
  return eigenvectors_ * w;
}

std::complex<double> SpectralPropagator::amplitude(int row, const SectorState& state,
                                                   double t) const {
  Eigen::VectorXcd w = eigenvectors_.adjoint() * state;
  const std::complex<double> minus_i(0.0, -1.0);
  std::complex<double> acc = 0.0;
  for (int k = 0; k < w.size(); ++k)
    acc += eigenvectors_(row, k) * std::exp(minus_i * eigenvalues_(k) * t) * w(k);
  return acc;
}

Eigen::VectorXcd SpectralPropagator::amplitude_scan(int row, const SectorState& state,
                                                    const std::vector<double>& times) const {
  const Eigen::VectorXcd w = eigenvectors_.adjoint() * state;
  const int d = dimension();
  Eigen::VectorXcd coef(d);
  for (int k = 0; k < d; ++k) coef(k) = eigenvectors_(row, k) * w(k);

  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < d; ++k) acc += coef(k) * std::exp(minus_i * eigenvalues_(k) * times[i]);
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

std::complex<double> SpectralPropagator::transfer_amplitude(double t) const {
  SectorState one = SectorState::Zero(dimension());
  one(1) = 1.0;
  return amplitude(end_index(), one, t);
}

}  // namespace endgate
