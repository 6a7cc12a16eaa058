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

#ifndef ZIGZAG_STATE_HPP
#define ZIGZAG_STATE_HPP

#include <Eigen/Dense>
#include <variant>

#include "zigzag/chain_model.hpp"

namespace zigzag {

/// Pure vector or density matrix on a HamiltonianMatrix-compatible basis.
/// A Full basis with n_sites = k doubles as a k-qubit register.
class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(Basis basis, int n_sites, Eigen::VectorXcd psi);
  QuantumState(Basis basis, int n_sites, Eigen::MatrixXcd rho);

  Basis basis() const { return basis_; }
  int n_sites() const { return n_sites_; }
  int dim() const;
  bool is_pure() const { return std::holds_alternative<Eigen::VectorXcd>(data_); }

  const Eigen::VectorXcd& vector() const { return std::get<Eigen::VectorXcd>(data_); }
  const Eigen::MatrixXcd& matrix() const { return std::get<Eigen::MatrixXcd>(data_); }
  /// Density matrix (outer product for pure states).
  Eigen::MatrixXcd density() const;

  double trace() const;
  double purity() const;

 private:
  Basis basis_ = Basis::SingleExcitation;
  int n_sites_ = 0;
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
};

/// |k>, k 1-based, in either basis.
QuantumState site_state(Basis basis, int n_sites, int site);
QuantumState vacuum_state(Basis basis, int n_sites);

/// Throws Error(Invariant) when norm/trace, Hermiticity or positivity fail.
void check_state(const QuantumState& s, double tol = 1e-9);

/// Throws Error(BasisMismatch) unless the state lives on h's basis.
void require_same_basis(const QuantumState& s, const HamiltonianMatrix& h);

}  // namespace zigzag

#endif  // ZIGZAG_STATE_HPP
