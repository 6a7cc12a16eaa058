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

#ifndef ZIGZAG_DYNAMICS_HPP
#define ZIGZAG_DYNAMICS_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "zigzag/chain_model.hpp"
#include "zigzag/pulse.hpp"
#include "zigzag/state.hpp"

namespace zigzag {

/// Per-site T1/T2 in microseconds. Infinite times disable a channel.
struct NoiseChannelSet {
  Eigen::VectorXd t1_us;
  Eigen::VectorXd t2_us;

  static NoiseChannelSet none(int n_sites);
  static NoiseChannelSet uniform(int n_sites, double t1_us, double t2_us);
  /// Builds T2 from 1/T2 = 1/T_phi + 1/(2 T1).
  static NoiseChannelSet from_tphi(int n_sites, double t1_us, double tphi_us);

  int size() const { return static_cast<int>(t1_us.size()); }
  /// 1/T1 in 1/ns.
  double relaxation_rate(int site) const;
  /// 1/T_phi = 1/T2 - 1/(2 T1) in 1/ns.
  double dephasing_rate(int site) const;
  double tphi_us(int site) const;
  bool enabled() const;
  /// Throws Error(Invariant) unless T2 <= 2 T1 and T_phi > 0 everywhere.
  void validate() const;
};

/// Collapse operators: sqrt(1/T1) lowering and sqrt(2/T_phi) number per
/// site; in the truncated basis, sqrt(1/T1)|0><k| and sqrt(2/T_phi)|k><k|.
std::vector<Eigen::MatrixXcd> collapse_operators(const NoiseChannelSet& ch,
                                                 Basis basis, int n_sites);

struct EvolutionOptions {
  /// Record spacing in ns; 0 records only the initial and final states.
  double record_interval = 0.0;
  /// Propagate the flat part of the schedule exactly.
  bool exact_static = true;
  /// Upper bound on ||H|| * h for the RK4 substep h.
  double max_phase_step = 0.1;
  /// Largest Liouvillian-exponential dimension (system dim) for the plateau.
  int max_expm_dim = 16;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  const QuantumState& final_state() const { return states.back(); }
};

/// psi(t) = exp(-iHt) psi0 via eigendecomposition. Density inputs are
/// propagated as U rho U^dagger.
QuantumState evolve_unitary(const HamiltonianMatrix& h, const QuantumState& psi0,
                            double t);

/// exp(-iHt) for a static Hermitian matrix.
Eigen::MatrixXcd propagator(const HamiltonianMatrix& h, double t);

/// Pure-state evolution under a pulse schedule (no dissipation).
Trajectory evolve_schedule(const Schedule& schedule, const SiteGraph& graph,
                           const QuantumState& psi0,
                           const EvolutionOptions& options = {});

/// Lindblad evolution under a pulse schedule. Parameter values come from
/// the schedule amplitudes, which must match the spec.
Trajectory evolve_lindblad(const Schedule& schedule, const SiteGraph& graph,
                           const QuantumState& rho0, const NoiseChannelSet& channels,
                           Basis basis, const EvolutionOptions& options = {});
Trajectory evolve_lindblad(const Schedule& schedule, const ChainSpec& spec,
                           const QuantumState& rho0, const NoiseChannelSet& channels,
                           Basis basis = Basis::SingleExcitation,
                           const EvolutionOptions& options = {});
Trajectory evolve_lindblad(const Schedule& schedule, const LatticeSpec& spec,
                           const QuantumState& rho0, const NoiseChannelSet& channels,
                           Basis basis = Basis::SingleExcitation,
                           const EvolutionOptions& options = {});

/// Vectorized Lindblad generator, column-major vec.
Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& h,
                             const std::vector<Eigen::MatrixXcd>& collapse);

/// Closed-form populations of the chain (0, delta, 0) with equal couplings j,
/// starting from site 1. Units: delta, j angular, t in matching time.
template <typename Scalar>
std::array<Scalar, 3> analytic_three_site(Scalar delta, Scalar j, Scalar t) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar omega = sqrt(delta * delta + Scalar(8) * j * j);
  if (omega == Scalar(0)) return {Scalar(1), Scalar(0), Scalar(0)};
  const Scalar co = cos(omega * t / Scalar(2)), so = sin(omega * t / Scalar(2));
  const Scalar cd = cos(delta * t / Scalar(2)), sd = sin(delta * t / Scalar(2));
  const Scalar r = delta / omega;
  const Scalar q = Scalar(0.25);
  const Scalar p1 = q * (co + cd) * (co + cd) + q * (r * so + sd) * (r * so + sd);
  const Scalar p2 = Scalar(4) * j * j / (omega * omega) * so * so;
  const Scalar p3 = q * (co - cd) * (co - cd) + q * (r * so - sd) * (r * so - sd);
  return {p1, p2, p3};
}

/// P3(delta_i, coupling_j) at fixed tau; rows follow delta_grid.
Eigen::MatrixXd sweep_solution_space(double tau, const Eigen::VectorXd& delta_grid,
                                     const Eigen::VectorXd& coupling_grid);

struct BrightSpot {
  double delta;
  double coupling;
  double p3;
};

/// Grid points that dominate their 8-neighbourhood and exceed threshold.
std::vector<BrightSpot> bright_spots(const Eigen::MatrixXd& p3,
                                     const Eigen::VectorXd& delta_grid,
                                     const Eigen::VectorXd& coupling_grid,
                                     double threshold = 0.99);

}  // namespace zigzag

#endif  // ZIGZAG_DYNAMICS_HPP
