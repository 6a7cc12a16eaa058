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

#ifndef ZIGZAG_DEVICE_HPP
#define ZIGZAG_DEVICE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace zigzag {

/// Smooth monotone control map f(z) = f0 + a1 z + a3 z^3 + ripple sin(k z),
/// output in MHz.
struct ControlMap {
  double f0 = 0.0;
  double a1 = 1.0;
  double a3 = 0.0;
  double ripple = 0.0;
  double k = 1.0;

  double value(double z) const;
  double slope(double z) const;
  /// Inverse on [lo, hi] by safeguarded Newton; clamps outside the image.
  double inverse(double f, double lo, double hi) const;
};

struct DeviceConfig {
  int n_qubits = 5;
  double z_min = -1.0;
  double z_max = 1.0;
  /// Nearest-neighbour qubit/coupler crosstalk on the effective Zpa.
  double crosstalk = 0.03;
  double noise_mhz = 0.02;
  /// Relative spread of hidden per-element coefficients.
  double variation = 0.05;
  std::uint64_t seed = 7;
  ControlMap qubit_map{0.0, 120.0, 30.0, 2.0, 3.0};
  ControlMap coupler_map{25.0, 20.0, 5.0, 0.5, 4.0};
  double qubit_offset_spread = 5.0;    ///< MHz
  double coupler_offset_spread = 1.0;  ///< MHz
};

/// Element of the device: qubits 0..Q-1, couplers Q..Q+C-1 (coupler c joins
/// qubits c and c+1).
struct Element {
  enum Kind { Qubit, Coupler } kind = Qubit;
  int index = 0;

  int id(int n_qubits) const { return kind == Qubit ? index : n_qubits + index; }
  /// Position along the chain; coupler c sits halfway between its qubits.
  double position() const { return kind == Qubit ? index : index + 0.5; }
};

/// Synthetic device with hidden control maps, linear crosstalk and
/// additive measurement noise. Experiment calls are counted per element;
/// the noise of a call depends only on (seed, element, call number).
class DeviceModel {
 public:
  explicit DeviceModel(const DeviceConfig& config = {});

  const DeviceConfig& config() const { return config_; }
  int n_qubits() const { return config_.n_qubits; }
  int n_couplers() const { return config_.n_qubits - 1; }
  int n_elements() const { return 2 * config_.n_qubits - 1; }

  /// Hidden per-element maps.
  const ControlMap& hidden_map(const Element& e) const;
  /// Design-level map without per-element variation (prior knowledge).
  const ControlMap& nominal_map(const Element& e) const;

  double zpa(const Element& e) const;
  void set_zpa(const Element& e, double z);
  const Eigen::VectorXd& qubit_zpas() const { return zq_; }
  const Eigen::VectorXd& coupler_zpas() const { return zc_; }
  void set_zpas(const Eigen::VectorXd& qubits, const Eigen::VectorXd& couplers);

  /// Noise-free parameters at the current Zpas (MHz).
  double true_value(const Element& e) const;
  Eigen::VectorXd true_frequencies() const;
  Eigen::VectorXd true_couplings() const;
  /// Noise-free parameters at arbitrary Zpas, device state untouched.
  void parameters_at(const Eigen::VectorXd& zq, const Eigen::VectorXd& zc,
                     Eigen::VectorXd& freqs, Eigen::VectorXd& couplings) const;

  /// Exact Zpas that realize the given parameters (MHz), by fixed-point
  /// iteration on the crosstalk. Throws OutOfRange if unreachable.
  void solve_zpas(const Eigen::VectorXd& freqs, const Eigen::VectorXd& couplings,
                  Eigen::VectorXd& zq, Eigen::VectorXd& zc) const;

  /// Next measurement-noise draw for an element (advances its counter).
  double draw_noise(const Element& e);
  std::uint64_t calls(const Element& e) const { return calls_[e.id(n_qubits())]; }
  void set_calls(const Element& e, std::uint64_t n) { calls_[e.id(n_qubits())] = n; }

 private:
  double effective_zpa(const Element& e, const Eigen::VectorXd& zq,
                       const Eigen::VectorXd& zc) const;

  DeviceConfig config_;
  std::vector<ControlMap> hidden_;
  ControlMap nominal_qubit_, nominal_coupler_;
  Eigen::VectorXd zq_, zc_;
  std::vector<std::uint64_t> calls_;
};

struct ExperimentGrid {
  double dt_ns = 1.0;
  int n_points = 256;
};

/// Sets the coupler Zpa, records the resonant exchange signal
/// P(t) = sin^2(2 pi J t), fits J and adds measurement noise. MHz.
double swap_experiment(DeviceModel& device, int coupler, double zpa,
                       const ExperimentGrid& grid = {});

/// Sets the qubit Zpa, records the precession exp(-2 pi i f t), fits f and
/// adds measurement noise. MHz.
double ramsey_experiment(DeviceModel& device, int qubit, double zpa,
                         const ExperimentGrid& grid = {});

/// Frequency (MHz) of P(t) = sin^2(2 pi J t) samples, J >= 0.
double fit_swap_frequency(const Eigen::VectorXd& p, double dt_ns);
/// Frequency (MHz) of exp(-2 pi i f t) samples.
double fit_precession_frequency(const Eigen::VectorXcd& s, double dt_ns);

}  // namespace zigzag

#endif  // ZIGZAG_DEVICE_HPP
