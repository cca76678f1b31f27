#pragma once

// Test-only oracle: builds chain Hamiltonians in the full 2^(N+1)-dimensional
// Hilbert space directly from bitstring basis states, independent of the
// sector builders, and runs the end-gate protocol there with W embedded as a
// true two-qubit unitary. Qubit q (1..N+1) owns bit q-1; the sector state |n>
// corresponds to the basis index 1 << (n-1), |0> to index 0.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "endgate/chain.hpp"
#include "endgate/protocol.hpp"

namespace oracle {

struct Bond {
  int a;  // qubits, 1-based
  int b;
  double strength;
};

inline std::vector<Bond> chain_bonds(const endgate::ChainSpec& spec, bool couple_target) {
  std::vector<Bond> bonds;
  const int n = spec.n_sites;
  const double j = spec.base_coupling;
  for (int k = 1; k < n; ++k) {
    double jk = j;
    if (spec.coupling_model == endgate::CouplingModel::Engineered)
      jk = j * std::sqrt(static_cast<double>(k) * (n - k));
    bonds.push_back({k, k + 1, jk});
  }
  if (couple_target) bonds.push_back({n, n + 1, j});
  return bonds;
}

// J (sigma^- sigma^+ + h.c.) on every bond: hop 01 <-> 10
inline Eigen::MatrixXcd full_xy(const endgate::ChainSpec& spec, bool couple_target) {
  const int qubits = spec.n_sites + 1;
  const int dim = 1 << qubits;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Bond& bond : chain_bonds(spec, couple_target)) {
    const int ba = 1 << (bond.a - 1), bb = 1 << (bond.b - 1);
    for (int s = 0; s < dim; ++s) {
      if ((s & ba) && !(s & bb)) {
        const int t = (s & ~ba) | bb;
        h(t, s) += bond.strength;
        h(s, t) += bond.strength;
      }
    }
  }
  return h;
}

// J sigma.sigma on every bond, shifted by -J * (#bonds) so H|0...0> = 0:
// 2J hop on 01 <-> 10 plus J sigma^z sigma^z diagonal
inline Eigen::MatrixXcd full_heisenberg(const endgate::ChainSpec& spec, bool couple_target) {
  const int qubits = spec.n_sites + 1;
  const int dim = 1 << qubits;
  const auto bonds = chain_bonds(spec, couple_target);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Bond& bond : bonds) {
    const int ba = 1 << (bond.a - 1), bb = 1 << (bond.b - 1);
    for (int s = 0; s < dim; ++s) {
      const bool ua = s & ba, ub = s & bb;
      h(s, s) += bond.strength * (ua == ub ? 1.0 : -1.0);  // sigma^z sigma^z
      if (ua && !ub) {
        const int t = (s & ~ba) | bb;
        h(t, s) += 2.0 * bond.strength;
        h(s, t) += 2.0 * bond.strength;
      }
    }
  }
  h -= spec.base_coupling * static_cast<double>(bonds.size()) *
       Eigen::MatrixXcd::Identity(dim, dim);
  return h;
}

inline Eigen::MatrixXcd full_operator(const endgate::ChainSpec& spec, bool couple_target) {
  if (spec.coupling_model == endgate::CouplingModel::Heisenberg)
    return full_heisenberg(spec, couple_target);
  return full_xy(spec, couple_target);  // engineered handled via bond strengths
}

/// Full-space index of the sector basis state |n>.
inline int embed_index(int n) { return n == 0 ? 0 : (1 << (n - 1)); }

/// Restriction of the full operator to the single-excitation subspace,
/// ordered like the sector basis |0>, |1>, ..., |N+1>.
inline Eigen::MatrixXcd restrict_to_sector(const Eigen::MatrixXcd& full, int n_sites) {
  const int d = n_sites + 2;
  Eigen::MatrixXcd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = full(embed_index(i), embed_index(j));
  return out;
}

/// Largest coupling from the single-excitation subspace to its complement;
/// zero iff the full operator conserves the excitation number on it.
inline double leak_out_of_sector(const Eigen::MatrixXcd& full, int n_sites) {
  const int d = n_sites + 2;
  std::vector<bool> in_sector(static_cast<std::size_t>(full.rows()), false);
  for (int i = 0; i < d; ++i) in_sector[static_cast<std::size_t>(embed_index(i))] = true;
  double leak = 0.0;
  for (int j = 0; j < d; ++j) {
    const int col = embed_index(j);
    for (int row = 0; row < full.rows(); ++row)
      if (!in_sector[static_cast<std::size_t>(row)])
        leak = std::max(leak, std::abs(full(row, col)));
  }
  return leak;
}

/// W(c, d) as a true two-qubit unitary on qubits N and N+1, applied to a
/// full-space state: every (10, 01) bystander pair rotates, 00 and 11 stay.
inline void apply_full_gate(Eigen::VectorXcd& psi, const endgate::EndGate& g, int n_sites) {
  const int bn = 1 << (n_sites - 1), bt = 1 << n_sites;
  for (int s = 0; s < psi.size(); ++s) {
    if ((s & bn) && !(s & bt)) {
      const int partner = (s & ~bn) | bt;
      const std::complex<double> a_n = psi(s), a_t = psi(partner);
      psi(s) = g.d * a_n - g.c * a_t;
      psi(partner) = std::conj(g.c) * a_n + std::conj(g.d) * a_t;
    }
  }
}

/// End-gate protocol executed entirely in the full Hilbert space; returns the
/// per-step probabilities |a_N|^2 + |a_T|^2.
inline std::vector<double> full_space_protocol(const endgate::ChainSpec& spec,
                                               const std::vector<double>& intervals) {
  const Eigen::MatrixXcd h = full_operator(spec, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXd lam = solver.eigenvalues();
  const Eigen::MatrixXcd v = solver.eigenvectors();

  const int dim = static_cast<int>(h.rows());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(embed_index(1)) = 1.0;

  const int idx_n = embed_index(spec.n_sites);
  const int idx_t = embed_index(spec.n_sites + 1);
  std::vector<double> ps;
  for (double dt : intervals) {
    Eigen::VectorXcd w = v.adjoint() * psi;
    for (int k = 0; k < dim; ++k) w(k) *= std::exp(std::complex<double>(0.0, -lam(k) * dt));
    psi = v * w;
    auto [gate, p] = endgate::compute_gate(psi(idx_n), psi(idx_t));
    if (gate) apply_full_gate(psi, *gate, spec.n_sites);
    ps.push_back(p);
  }
  return ps;
}

}  // namespace oracle
