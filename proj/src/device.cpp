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

#include "zigzag/device.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "zigzag/errors.hpp"
#include "zigzag/noise.hpp"
#include "zigzag/protocols.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

double ControlMap::value(double z) const {
  return f0 + a1 * z + a3 * z * z * z + ripple * std::sin(k * z);
}

double ControlMap::slope(double z) const {
  return a1 + 3.0 * a3 * z * z + ripple * k * std::cos(k * z);
}

double ControlMap::inverse(double f, double lo, double hi) const {
  if (f <= value(lo)) return lo;
  if (f >= value(hi)) return hi;
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = value(z) - f;
    if (r > 0.0) hi = z; else lo = z;
    double next = z - r / slope(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-15 * (1.0 + std::abs(z))) return next;
    z = next;
  }
  return z;
}

namespace {

double uniform_sym(std::uint64_t seed, int element, int slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), 0x6d617073u,
                    static_cast<std::uint32_t>(element), static_cast<std::uint32_t>(slot)};
  std::mt19937_64 rng(seq);
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

}  // namespace

DeviceModel::DeviceModel(const DeviceConfig& config) : config_(config) {
  if (config.n_qubits < 2) throw Error(ErrorKind::InvalidSize, "device needs >= 2 qubits");
  if (!(config.z_min < config.z_max)) throw Error(ErrorKind::Precondition, "empty Zpa range");
  if (std::abs(config.crosstalk) >= 0.25) {
    throw Error(ErrorKind::Precondition, "crosstalk must satisfy |k| < 0.25");
  }
  nominal_qubit_ = config.qubit_map;
  nominal_coupler_ = config.coupler_map;
  const double v = config.variation;
  for (int id = 0; id < n_elements(); ++id) {
    const bool qubit = id < n_qubits();
    ControlMap m = qubit ? nominal_qubit_ : nominal_coupler_;
    m.a1 *= 1.0 + v * uniform_sym(config.seed, id, 0);
    m.a3 *= 1.0 + v * uniform_sym(config.seed, id, 1);
    m.ripple *= 1.0 + v * uniform_sym(config.seed, id, 2);
    m.f0 += (qubit ? config.qubit_offset_spread : config.coupler_offset_spread) *
            uniform_sym(config.seed, id, 3);
    const double lo = config.z_min - 0.5, hi = config.z_max + 0.5;
    for (int s = 0; s <= 64; ++s) {
      if (m.slope(lo + (hi - lo) * s / 64.0) <= 0.0) {
        throw Error(ErrorKind::Invariant, "control map is not monotone on the Zpa range");
      }
    }
    hidden_.push_back(m);
  }
  zq_ = Eigen::VectorXd::Zero(n_qubits());
  zc_ = Eigen::VectorXd::Zero(n_couplers());
  calls_.assign(static_cast<size_t>(n_elements()), 0);
}

const ControlMap& DeviceModel::hidden_map(const Element& e) const {
  return hidden_[static_cast<size_t>(e.id(n_qubits()))];
}

const ControlMap& DeviceModel::nominal_map(const Element& e) const {
  return e.kind == Element::Qubit ? nominal_qubit_ : nominal_coupler_;
}

double DeviceModel::zpa(const Element& e) const {
  return e.kind == Element::Qubit ? zq_(e.index) : zc_(e.index);
}

void DeviceModel::set_zpa(const Element& e, double z) {
  if (!(z >= config_.z_min && z <= config_.z_max)) {
    throw Error(ErrorKind::OutOfRange, "Zpa outside the configured range");
  }
  (e.kind == Element::Qubit ? zq_(e.index) : zc_(e.index)) = z;
}

void DeviceModel::set_zpas(const Eigen::VectorXd& qubits, const Eigen::VectorXd& couplers) {
  if (qubits.size() != n_qubits() || couplers.size() != n_couplers()) {
    throw Error(ErrorKind::InvalidSize, "Zpa vector size mismatch");
  }
  for (int i = 0; i < n_qubits(); ++i) set_zpa({Element::Qubit, i}, qubits(i));
  for (int c = 0; c < n_couplers(); ++c) set_zpa({Element::Coupler, c}, couplers(c));
}

double DeviceModel::effective_zpa(const Element& e, const Eigen::VectorXd& zq,
                                  const Eigen::VectorXd& zc) const {
  const double k = config_.crosstalk;
  if (e.kind == Element::Coupler) return zc(e.index) + k * (zq(e.index) + zq(e.index + 1));
  double z = zq(e.index);
  if (e.index > 0) z += k * zc(e.index - 1);
  if (e.index < n_couplers()) z += k * zc(e.index);
  return z;
}

double DeviceModel::true_value(const Element& e) const {
  return hidden_map(e).value(effective_zpa(e, zq_, zc_));
}

void DeviceModel::parameters_at(const Eigen::VectorXd& zq, const Eigen::VectorXd& zc,
                                Eigen::VectorXd& freqs, Eigen::VectorXd& couplings) const {
  freqs.resize(n_qubits());
  couplings.resize(n_couplers());
  for (int i = 0; i < n_qubits(); ++i) {
    const Element e{Element::Qubit, i};
    freqs(i) = hidden_map(e).value(effective_zpa(e, zq, zc));
  }
  for (int c = 0; c < n_couplers(); ++c) {
    const Element e{Element::Coupler, c};
    couplings(c) = hidden_map(e).value(effective_zpa(e, zq, zc));
  }
}

Eigen::VectorXd DeviceModel::true_frequencies() const {
  Eigen::VectorXd f, j;
  parameters_at(zq_, zc_, f, j);
  return f;
}

Eigen::VectorXd DeviceModel::true_couplings() const {
  Eigen::VectorXd f, j;
  parameters_at(zq_, zc_, f, j);
  return j;
}

void DeviceModel::solve_zpas(const Eigen::VectorXd& freqs, const Eigen::VectorXd& couplings,
                             Eigen::VectorXd& zq, Eigen::VectorXd& zc) const {
  if (freqs.size() != n_qubits() || couplings.size() != n_couplers()) {
    throw Error(ErrorKind::InvalidSize, "parameter vector size mismatch");
  }
  const double lo = config_.z_min - 0.5, hi = config_.z_max + 0.5;
  Eigen::VectorXd eq(n_qubits()), ec(n_couplers());
  for (int i = 0; i < n_qubits(); ++i) eq(i) = hidden_map({Element::Qubit, i}).inverse(freqs(i), lo, hi);
  for (int c = 0; c < n_couplers(); ++c) {
    ec(c) = hidden_map({Element::Coupler, c}).inverse(couplings(c), lo, hi);
  }
  const double k = config_.crosstalk;
  zq = eq;
  zc = ec;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd nq(n_qubits()), nc(n_couplers());
    for (int i = 0; i < n_qubits(); ++i) {
      double s = 0.0;
      if (i > 0) s += zc(i - 1);
      if (i < n_couplers()) s += zc(i);
      nq(i) = eq(i) - k * s;
    }
    for (int c = 0; c < n_couplers(); ++c) nc(c) = ec(c) - k * (zq(c) + zq(c + 1));
    const double change = std::max((nq - zq).lpNorm<Eigen::Infinity>(),
                                   (nc - zc).lpNorm<Eigen::Infinity>());
    zq = nq;
    zc = nc;
    if (change == 0.0) break;
  }
  const auto in_range = [&](const Eigen::VectorXd& z) {
    return z.minCoeff() >= config_.z_min && z.maxCoeff() <= config_.z_max;
  };
  if (!in_range(zq) || !in_range(zc)) {
    throw Error(ErrorKind::OutOfRange, "target parameters outside the reachable range");
  }
}

double DeviceModel::draw_noise(const Element& e) {
  const int id = e.id(n_qubits());
  const NoiseKey key{config_.seed, static_cast<std::uint64_t>(id), calls_[id]++};
  return normal_draw(key, 0, config_.noise_mhz);
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

double refine(const std::function<double(double)>& score, double step, double nu_max) {
  double best_nu = step, best = -std::numeric_limits<double>::infinity();
  for (double nu = step; nu <= nu_max; nu += step) {
    const double v = score(nu);
    if (v > best) {
      best = v;
      best_nu = nu;
    }
  }
  return golden_section_max(score, best_nu - step, best_nu + step, 1e-13);
}

}  // namespace

double fit_swap_frequency(const Eigen::VectorXd& p, double dt_ns) {
  const int n = static_cast<int>(p.size());
  if (n < 4 || dt_ns <= 0.0) throw Error(ErrorKind::Precondition, "swap trace too short");
  auto score = [&](double nu) {
    double r = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = p(k) - 0.5 * (1.0 - std::cos(nu * k * dt_ns));
      r += d * d;
    }
    return -r;
  };
  const double step = 2.0 * kPi / (8.0 * n * dt_ns);
  const double nu = refine(score, step, kPi / dt_ns);
  return std::abs(nu) / (4.0 * kPi * 1e-3);
}

double fit_precession_frequency(const Eigen::VectorXcd& s, double dt_ns) {
  const int n = static_cast<int>(s.size());
  if (n < 4 || dt_ns <= 0.0) throw Error(ErrorKind::Precondition, "Ramsey trace too short");
  auto score = [&](double nu) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) acc += s(k) * std::polar(1.0, nu * k * dt_ns);
    return std::abs(acc);
  };
  // Shift by the Nyquist band so the scan runs over positive nu only.
  const double step = 2.0 * kPi / (8.0 * n * dt_ns);
  const double band = kPi / dt_ns;
  auto shifted = [&](double nu) { return score(nu - band); };
  const double nu = refine(shifted, step, 2.0 * band) - band;
  return nu / (2.0 * kPi * 1e-3);
}

double swap_experiment(DeviceModel& device, int coupler, double zpa, const ExperimentGrid& grid) {
  if (coupler < 0 || coupler >= device.n_couplers()) {
    throw Error(ErrorKind::OutOfRange, "coupler index out of range");
  }
  const Element e{Element::Coupler, coupler};
  device.set_zpa(e, zpa);
  const double j = device.true_value(e);
  Eigen::VectorXd p(grid.n_points);
  for (int k = 0; k < grid.n_points; ++k) {
    const double s = std::sin(2.0 * kPi * j * 1e-3 * k * grid.dt_ns);
    p(k) = s * s;
  }
  return fit_swap_frequency(p, grid.dt_ns) + device.draw_noise(e);
}

double ramsey_experiment(DeviceModel& device, int qubit, double zpa, const ExperimentGrid& grid) {
  if (qubit < 0 || qubit >= device.n_qubits()) {
    throw Error(ErrorKind::OutOfRange, "qubit index out of range");
  }
  const Element e{Element::Qubit, qubit};
  device.set_zpa(e, zpa);
  const double f = device.true_value(e);
  Eigen::VectorXcd s(grid.n_points);
  for (int k = 0; k < grid.n_points; ++k) s(k) = std::polar(1.0, -2.0 * kPi * f * 1e-3 * k * grid.dt_ns);
  return fit_precession_frequency(s, grid.dt_ns) + device.draw_noise(e);
}

}  // namespace zigzag
