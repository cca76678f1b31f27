#include "endgate/chain.hpp"

#include <random>

namespace endgate {

std::string to_string(CouplingModel m) {
  switch (m) {
    case CouplingModel::Xy: return "xy";
    case CouplingModel::Heisenberg: return "heisenberg";
    case CouplingModel::Engineered: return "engineered";
  }
  return "?";
}

CouplingModel coupling_model_from_string(const std::string& s) {
  if (s == "xy" || s == "XY") return CouplingModel::Xy;
  if (s == "heisenberg" || s == "Heisenberg") return CouplingModel::Heisenberg;
  if (s == "engineered" || s == "Engineered") return CouplingModel::Engineered;
  throw config_error("unknown coupling model '" + s + "'");
}

void ChainSpec::validate() const {
  if (n_sites < 1) throw config_error("chain length N must be >= 1");
  if (!(base_coupling > 0.0)) throw config_error("base coupling J must be > 0");
  if (coupling_model == CouplingModel::Engineered && n_sites < 2)
    throw config_error("engineered profile needs N >= 2");
  if (disorder) {
    if (disorder->relative_amplitude < 0.0 || disorder->relative_amplitude >= 1.0)
      throw config_error("disorder amplitude must lie in [0, 1)");
  }
  if (field_strength && *field_strength < 0.0)
    throw config_error("field strength B must be >= 0");
}

SectorHamiltonian::SectorHamiltonian(Eigen::MatrixXcd matrix, int n_sites, bool couples_target)
    : matrix_(std::move(matrix)), n_sites_(n_sites), couples_target_(couples_target) {
  const int d = n_sites_ + 2;
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw config_error("sector matrix must be (N+2) x (N+2)");
}

double SectorHamiltonian::hermiticity_defect() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

Eigen::MatrixXcd zero_sector(int n_sites) {
  return Eigen::MatrixXcd::Zero(n_sites + 2, n_sites + 2);
}

}  // namespace

SectorHamiltonian build_xy(const ChainSpec& spec, bool couple_target) {
  spec.validate();
  const int n = spec.n_sites;
  const double j = spec.base_coupling;
  Eigen::MatrixXcd m = zero_sector(n);
  for (int k = 1; k < n; ++k) {
    m(k, k + 1) = j;
    m(k + 1, k) = j;
  }
  if (couple_target) {
    m(n, n + 1) = j;
    m(n + 1, n) = j;
  }
  return SectorHamiltonian(std::move(m), n, couple_target);
}

SectorHamiltonian build_heisenberg(const ChainSpec& spec, bool couple_target) {
  spec.validate();
  const int n = spec.n_sites;
  const double j = spec.base_coupling;
  Eigen::MatrixXcd m = zero_sector(n);
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n + 2);
  auto add_bond = [&](int a, int b) {
    m(a, b) = 2.0 * j;
    m(b, a) = 2.0 * j;
    degree(a) += 1.0;
    degree(b) += 1.0;
  };
  for (int k = 1; k < n; ++k) add_bond(k, k + 1);
  if (couple_target) add_bond(n, n + 1);
  // shift by the all-down energy J * (#bonds) so that H|0> = 0 exactly
  for (int k = 1; k < n + 2; ++k) m(k, k) = -2.0 * j * degree(k);
  return SectorHamiltonian(std::move(m), n, couple_target);
}

SectorHamiltonian build_engineered(const ChainSpec& spec, bool couple_target) {
  spec.validate();
  if (spec.n_sites < 2) throw config_error("engineered profile needs N >= 2");
  const int n = spec.n_sites;
  const double j = spec.base_coupling;
  Eigen::MatrixXcd m = zero_sector(n);
  for (int k = 1; k < n; ++k) {
    const double jk = j * std::sqrt(static_cast<double>(k) * (n - k));
    m(k, k + 1) = jk;
    m(k + 1, k) = jk;
  }
  if (couple_target) {
    m(n, n + 1) = j;
    m(n + 1, n) = j;
  }
  return SectorHamiltonian(std::move(m), n, couple_target);
}

SectorHamiltonian build_sector(const ChainSpec& spec, bool couple_target) {
  SectorHamiltonian h = [&] {
    switch (spec.coupling_model) {
      case CouplingModel::Heisenberg: return build_heisenberg(spec, couple_target);
      case CouplingModel::Engineered: return build_engineered(spec, couple_target);
      case CouplingModel::Xy:
      default: return build_xy(spec, couple_target);
    }
  }();
  if (spec.disorder && spec.disorder->relative_amplitude > 0.0)
    return apply_disorder(h, *spec.disorder);
  return h;
}

SectorHamiltonian apply_disorder(const SectorHamiltonian& h, const DisorderSpec& d) {
  if (d.relative_amplitude < 0.0 || d.relative_amplitude >= 1.0)
    throw config_error("disorder amplitude must lie in [0, 1)");
  if (h.hermiticity_defect() > 1e-12)
    throw numerical_error("apply_disorder: input is not Hermitian");
  const int n = h.n_sites();
  Eigen::MatrixXcd m = h.matrix();
  std::mt19937_64 rng(d.seed);
  // engine output mapped to [0,1) by hand: bit-reproducible across platforms,
  // unlike uniform_real_distribution
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int k = 1; k < n; ++k) {
    const double delta = d.relative_amplitude * (2.0 * uniform() - 1.0);
    m(k, k + 1) *= (1.0 + delta);
    m(k + 1, k) = std::conj(m(k, k + 1));
  }
  return SectorHamiltonian(std::move(m), n, h.couples_target());
}

}  // namespace endgate
