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

#ifndef ZIGZAG_FEEDBACK_HPP
#define ZIGZAG_FEEDBACK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "zigzag/device.hpp"
#include "zigzag/optimizers.hpp"
#include "zigzag/protocols.hpp"

namespace zigzag {

/// Population-balance cost on L sampled transfer times.
struct CostSpec {
  int samples = 15;     ///< L
  double target = 0.5;  ///< population on each end site

  void validate() const;
  /// t_l = (2l - 1) tau, l = 1..L (odd multiples; even multiples revive Q1).
  std::vector<double> sample_times(double tau) const;
};

/// (1/L) sum |P1 - PN| / (P1 + PN); a term with P1 + PN < 1e-6 counts 1.
double population_cost(const std::vector<double>& p1, const std::vector<double>& pn);

struct SampledPopulations {
  std::vector<double> times;  ///< ns, pulse-start to pulse-end
  std::vector<double> p1;
  std::vector<double> pn;
};

/// FST feedback problem on a device. The free vector holds qubit Zpas
/// 2..N followed by all coupler Zpas; qubit 1 stays at fixed_qubit_zpa.
struct FeedbackProblem {
  DeviceModel device;
  FstSetup fst;
  CostSpec cost;
  double plateau = 0.0;   ///< calibrated on the target chain, ns
  double tau = 0.0;
  double fixed_qubit_zpa = 0.0;
  Eigen::VectorXd target_x;  ///< free vector realizing the target chain exactly

  int dimension() const { return 2 * (device.n_qubits() - 1); }
};

FeedbackProblem make_feedback_problem(const DeviceModel& device, const FstSetup& fst,
                                      const CostSpec& cost = {});

/// Device parameters at x as a chain (angular units).
ChainSpec chain_at(const FeedbackProblem& problem, const Eigen::VectorXd& x);
SampledPopulations sample_populations(const FeedbackProblem& problem, const Eigen::VectorXd& x);
double feedback_cost(const FeedbackProblem& problem, const Eigen::VectorXd& x);

/// Start point whose free parameters differ from the target by +/- delta_mhz
/// (sign per parameter from the seed). Qubit 1 keeps its Zpa.
Eigen::VectorXd perturbed_start(const FeedbackProblem& problem, double delta_mhz, std::uint64_t seed);

/// Zpa change worth `mhz` of parameter change at x, per free coordinate,
/// from the design-level maps.
Eigen::VectorXd zpa_equivalent(const FeedbackProblem& problem, const Eigen::VectorXd& x,
                               double mhz);

struct FeedbackOptions {
  OptimizerMethod method = OptimizerMethod::NelderMead;
  int budget = 300;
  double nm_step_mhz = 0.5;
  double de_box_mhz = 2.0;
  int de_population = 15;
  double de_f = 0.6;
  double de_cr = 0.8;
  std::uint64_t seed = 1;
  int threads = 1;
  double stabilization_tolerance = 0.005;
};

struct FeedbackOutcome {
  OptimizeResult result;
  Eigen::VectorXd x0;
  double initial_cost = 0.0;
  int stabilization_index = 0;
  SampledPopulations final_populations;
};

FeedbackOutcome optimize_feedback(const FeedbackProblem& problem, const Eigen::VectorXd& x0,
                                  const FeedbackOptions& options = {});

}  // namespace zigzag

#endif  // ZIGZAG_FEEDBACK_HPP
