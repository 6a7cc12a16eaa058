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

#ifndef ZIGZAG_CALIBRATION_HPP
#define ZIGZAG_CALIBRATION_HPP

#include <string>
#include <vector>

#include "zigzag/chain_model.hpp"
#include "zigzag/device.hpp"

namespace zigzag {

enum class EnvironmentScheme { StaggeredAverage, ExtremeDetuned };
const char* environment_scheme_name(EnvironmentScheme s);
EnvironmentScheme parse_environment_scheme(const std::string& name);

struct CalibrationConfig {
  double coupling_threshold = 0.1;   ///< MHz
  double frequency_threshold = 0.1;  ///< MHz
  int max_outer_iterations = 2;
  int max_inner_iterations = 5;      ///< experiments per calibration attempt
  double radius = 1.0;               ///< environment radius, in sites
  double parallel_distance = 3.0;    ///< units further apart run concurrently
  EnvironmentScheme scheme = EnvironmentScheme::StaggeredAverage;
  double stagger_zpa = 0.3;          ///< parking amplitude for the staggered scheme
  double secant_perturbation = 0.05; ///< Zpa offset of the second probe
  double secant_epsilon = 1e-9;      ///< MHz; smaller value gaps are degenerate
  bool parallel = true;
  int threads = 1;
  ExperimentGrid grid;

  void validate() const;
};

/// Secant prediction z2 = z1 + (z1 - z0) / (v1 - v0) * (target - v1).
/// Throws DegenerateSecant when |v1 - v0| <= eps.
double secant_step(double z0, double v0, double z1, double v1, double target,
                   double eps = 1e-9);

struct ParameterReport {
  Element element;
  double target = 0.0;             ///< MHz
  double zpa = 0.0;
  double measured = 0.0;           ///< accepted (qubit) or check (coupler) value, MHz
  double measured_residual = 0.0;
  double true_value = 0.0;
  double true_residual = 0.0;
  int max_inner_iterations = 0;    ///< largest experiment count of one attempt
  int experiments = 0;             ///< all experiments on this element
  bool converged = false;
};

struct CalibrationReport {
  std::vector<ParameterReport> parameters;  ///< couplers first, then qubits
  int outer_cycles = 0;
  bool converged = false;
  EnvironmentScheme scheme = EnvironmentScheme::StaggeredAverage;
  std::string averaging;
  Eigen::VectorXd qubit_zpas;
  Eigen::VectorXd coupler_zpas;

  double max_measured_residual() const;
  double max_true_residual() const;
  int max_inner_iterations() const;
};

/// Coupler stage, then qubit stage with couplers frozen, then a coupler
/// check; offenders restart the cycle, up to max_outer_iterations. Targets
/// are the chain's couplings and frequencies. Environment qubits are parked
/// only while couplers are calibrated in the first cycle. Leaves the device
/// at the calibrated Zpas. Non-convergence is reported, not thrown.
CalibrationReport calibrate_all(DeviceModel& device, const ChainSpec& targets,
                                const CalibrationConfig& config = {});

/// Groups of elements whose pairwise distance exceeds d, in first-fit order.
std::vector<std::vector<Element>> calibration_rounds(const std::vector<Element>& elements,
                                                     double d);

}  // namespace zigzag

#endif  // ZIGZAG_CALIBRATION_HPP
