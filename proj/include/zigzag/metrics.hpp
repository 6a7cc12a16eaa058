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

#ifndef ZIGZAG_METRICS_HPP
#define ZIGZAG_METRICS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "zigzag/state.hpp"

namespace zigzag {

enum class TargetKind { BellSinglet, W4, Custom };

const char* target_name(TargetKind t);

struct FidelityReport {
  double value = 0.0;
  TargetKind target = TargetKind::Custom;
  double phase_maximized_value = 0.0;
  std::vector<int> subsystem;  ///< 1-based sites
};

/// Register state on the given sites (first listed = most significant bit).
/// Full basis: partial trace. Truncated basis: the vacuum and any excitation
/// outside `sites` map to |0...0>, site sites[i] maps to the i-th bit.
QuantumState reduce_to_sites(const QuantumState& state, const std::vector<int>& sites);

/// (|01> - |10>)/sqrt(2).
Eigen::VectorXcd bell_singlet();
/// (|1000> + |0100> + |0010> + |0001>)/2.
Eigen::VectorXcd w_state4();

/// Tr(rho |t><t|) with the phase-maximized companion
/// max over relative phases of the target's computational components.
FidelityReport state_fidelity(const QuantumState& rho, const Eigen::VectorXcd& target,
                              TargetKind kind = TargetKind::Custom);
FidelityReport bell_fidelity(const QuantumState& rho2);
FidelityReport w_fidelity(const QuantumState& rho4);

/// Applies diag(1, e^{i phi_q}) on every register qubit q.
QuantumState apply_local_phases(const QuantumState& reg, const std::vector<double>& phases);

/// Per-site populations P_n = <n|rho|n> (truncated) or <n_n> (full).
Eigen::VectorXd populations(const QuantumState& s);
double vacuum_population(const QuantumState& s);

}  // namespace zigzag

#endif  // ZIGZAG_METRICS_HPP
