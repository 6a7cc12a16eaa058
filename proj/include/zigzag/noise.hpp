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

#ifndef ZIGZAG_NOISE_HPP
#define ZIGZAG_NOISE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "zigzag/chain_model.hpp"
#include "zigzag/dynamics.hpp"
#include "zigzag/protocols.hpp"

namespace zigzag {

enum class NoiseTarget { OmegaEven, OmegaOdd, Couplings };

const char* noise_target_name(NoiseTarget t);
NoiseTarget parse_noise_target(const std::string& name);

/// Quasi-static Gaussian offsets, sigma in ordinary-frequency MHz.
struct NoiseModel {
  NoiseTarget target = NoiseTarget::OmegaEven;
  double sigma_mhz = 0.0;
};

/// Stream coordinates of one realization.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint64_t sigma_index = 0;
  std::uint64_t sample_index = 0;
};

/// N(0, sigma) draw for one parameter; a fresh engine per key, so the value
/// depends only on (seed, sigma index, sample index, parameter index).
double normal_draw(const NoiseKey& key, std::uint64_t parameter, double sigma);

ChainSpec sample_noisy_spec(const ChainSpec& spec, const NoiseModel& model,
                            const NoiseKey& key);
ChainSpec sample_noisy_spec(const ChainSpec& spec, const NoiseModel& model,
                            std::uint64_t seed);

enum class FidelityMeasure { Bell, Process };

struct DegradationCurve {
  std::vector<double> sigma_grid;  ///< MHz
  std::vector<double> mean_ratio;
  std::vector<double> std;         ///< sample standard deviation of F/F0
  std::vector<double> sem;         ///< std / sqrt(n_samples)
  int n_samples = 0;
  double baseline = 0.0;           ///< F0
  std::vector<std::vector<double>> samples;  ///< raw F per sigma
};

struct DegradationSetup {
  FstSetup fst;
  NoiseTarget target = NoiseTarget::OmegaEven;
  std::vector<double> sigma_grid_mhz{0.0};
  NoiseChannelSet channels;
  int n_samples = 100;
  std::uint64_t seed = 1;
  FidelityMeasure measure = FidelityMeasure::Bell;
  int threads = 1;
};

/// Monte Carlo F/F0 over the sigma grid. The plateau is calibrated once on
/// the noiseless chain and held fixed for every realization.
DegradationCurve degradation_sweep(const DegradationSetup& setup);

struct ProcessFidelity {
  double fidelity = 0.0;
  double projection_distance = 0.0;  ///< Frobenius distance to the CPTP chi
  Eigen::Matrix4cd chi;              ///< Pauli basis {I, X, -iY, Z}
};

/// Linear-inversion chi from the images of |0>, |1>, |+>, |+i>.
Eigen::Matrix4cd chi_from_images(const Eigen::Matrix2cd& e0, const Eigen::Matrix2cd& e1,
                                 const Eigen::Matrix2cd& eplus, const Eigen::Matrix2cd& eplus_i);

/// Nearest completely positive, trace-preserving chi (Frobenius norm),
/// via Dykstra alternating projections.
Eigen::Matrix4cd project_cptp(const Eigen::Matrix4cd& chi, double* distance = nullptr);

/// Process fidelity Tr(chi chi_ideal) of the map from site 1 to site N,
/// with chi_ideal the identity process.
ProcessFidelity pst_process_fidelity(const ChainSpec& spec, const NoiseChannelSet& channels,
                                     const Schedule& schedule);

}  // namespace zigzag

#endif  // ZIGZAG_NOISE_HPP
