// Copyright 2026 The Zigzag Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zigzag/state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "zigzag/errors.hpp"

namespace zigzag {

QuantumState::QuantumState(Basis basis, int n_sites, Eigen::VectorXcd psi)
    : basis_(basis), n_sites_(n_sites), data_(std::move(psi)) {
  if (vector().size() != dim()) {
    throw Error(ErrorKind::BasisMismatch, "state vector size does not match basis");
  }
}

QuantumState::QuantumState(Basis basis, int n_sites, Eigen::MatrixXcd rho)
    : basis_(basis), n_sites_(n_sites), data_(std::move(rho)) {
  if (matrix().rows() != dim() || matrix().cols() != dim()) {
    throw Error(ErrorKind::BasisMismatch, "density matrix size does not match basis");
  }
}

int QuantumState::dim() const { return basis_dimension(basis_, n_sites_); }

Eigen::MatrixXcd QuantumState::density() const {
  if (is_pure()) return vector() * vector().adjoint();
  return matrix();
}

double QuantumState::trace() const {
  if (is_pure()) return vector().squaredNorm();
  return matrix().trace().real();
}

double QuantumState::purity() const {
  if (is_pure()) return std::pow(vector().squaredNorm(), 2);
  return (matrix() * matrix()).trace().real();
}

QuantumState site_state(Basis basis, int n_sites, int site) {
  if (site < 1 || site > n_sites) {
    throw Error(ErrorKind::OutOfRange, "site index out of range");
  }
  const int d = basis_dimension(basis, n_sites);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
  if (basis == Basis::SingleExcitation) {
    psi(site) = 1.0;
  } else {
    psi(1 << (n_sites - site)) = 1.0;
  }
  return QuantumState(basis, n_sites, psi);
}

QuantumState vacuum_state(Basis basis, int n_sites) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis_dimension(basis, n_sites));
  psi(0) = 1.0;
  return QuantumState(basis, n_sites, psi);
}

void check_state(const QuantumState& s, double tol) {
  if (s.is_pure()) {
    if (std::abs(s.vector().norm() - 1.0) > tol) {
      throw Error(ErrorKind::Invariant, "state vector is not normalized");
    }
    return;
  }
  const Eigen::MatrixXcd& rho = s.matrix();
  if (std::abs(rho.trace().real() - 1.0) > tol) {
    throw Error(ErrorKind::Invariant, "density matrix trace is not 1");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::Invariant, "density matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::Invariant, "density matrix is not positive semidefinite");
  }
}

void require_same_basis(const QuantumState& s, const HamiltonianMatrix& h) {
  if (s.basis() != h.basis || s.n_sites() != h.n_sites) {
    throw Error(ErrorKind::BasisMismatch, "state and Hamiltonian bases differ");
  }
}

}  // namespace zigzag
