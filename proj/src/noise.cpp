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

#include "zigzag/noise.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <random>

#include "zigzag/errors.hpp"
#include "zigzag/metrics.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/spectral.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

using cd = std::complex<double>;

const char* noise_target_name(NoiseTarget t) {
  switch (t) {
    case NoiseTarget::OmegaEven: return "omega_even";
    case NoiseTarget::OmegaOdd: return "omega_odd";
    case NoiseTarget::Couplings: return "couplings";
  }
  return "omega_even";
}

NoiseTarget parse_noise_target(const std::string& name) {
  if (name == "omega_even") return NoiseTarget::OmegaEven;
  if (name == "omega_odd") return NoiseTarget::OmegaOdd;
  if (name == "couplings") return NoiseTarget::Couplings;
  throw Error(ErrorKind::Schema, "unknown noise target '" + name + "'");
}

double normal_draw(const NoiseKey& key, std::uint64_t parameter, double sigma) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(key.seed), hi(key.seed), lo(key.sigma_index), hi(key.sigma_index),
                    lo(key.sample_index), hi(key.sample_index), lo(parameter), hi(parameter)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  return sigma * normal(engine);
}

ChainSpec sample_noisy_spec(const ChainSpec& spec, const NoiseModel& model,
                            const NoiseKey& key) {
  validate(spec);
  if (model.sigma_mhz < 0.0) throw Error(ErrorKind::Precondition, "sigma must be non-negative");
  ChainSpec out = spec;
  if (model.sigma_mhz == 0.0) return out;
  const double sigma = mhz_to_angular(model.sigma_mhz);
  const int n = spec.n_sites;
  if (model.target == NoiseTarget::Couplings) {
    for (int e = 0; e + 1 < n; ++e) {
      out.couplings(e) += normal_draw(key, static_cast<std::uint64_t>(n + e), sigma);
    }
  } else {
    const int parity = model.target == NoiseTarget::OmegaEven ? 0 : 1;
    for (int k = 1; k <= n; ++k) {
      if (k % 2 == parity) {
        out.frequencies(k - 1) += normal_draw(key, static_cast<std::uint64_t>(k - 1), sigma);
      }
    }
  }
  out.meta.kind = ChainKind::Custom;
  return out;
}

ChainSpec sample_noisy_spec(const ChainSpec& spec, const NoiseModel& model,
                            std::uint64_t seed) {
  return sample_noisy_spec(spec, model, NoiseKey{seed, 0, 0});
}

// ---------------------------------------------------------------------------
// Process tomography

namespace {

std::array<Eigen::Matrix2cd, 4> pauli_basis() {
  Eigen::Matrix2cd i = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x, my, z;
  x << 0, 1, 1, 0;
  my << 0, -1, 1, 0;  // -iY
  z << 1, 0, 0, -1;
  return {i, x, my, z};
}

Eigen::Matrix2cd tp_image(const Eigen::Matrix4cd& chi) {
  const auto e = pauli_basis();
  Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero();
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) a += chi(m, n) * e[n].adjoint() * e[m];
  }
  return a;
}

// Orthonormal (Frobenius) real coordinates for 4x4 Hermitian matrices.
Eigen::Matrix<double, 16, 1> to_coords(const Eigen::Matrix4cd& h) {
  Eigen::Matrix<double, 16, 1> x;
  int k = 0;
  for (int i = 0; i < 4; ++i) x(k++) = h(i, i).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      x(k++) = std::sqrt(2.0) * h(i, j).real();
      x(k++) = -std::sqrt(2.0) * h(i, j).imag();
    }
  }
  return x;
}

Eigen::Matrix4cd from_coords(const Eigen::Matrix<double, 16, 1>& x) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  int k = 0;
  for (int i = 0; i < 4; ++i) h(i, i) = x(k++);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double re = x(k++) / std::sqrt(2.0);
      const double im = -x(k++) / std::sqrt(2.0);
      h(i, j) = cd(re, im);
      h(j, i) = cd(re, -im);
    }
  }
  return h;
}

Eigen::Matrix4cd project_psd(const Eigen::Matrix4cd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (h + h.adjoint()));
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

struct TpProjector {
  Eigen::Matrix<double, 4, 16> m;
  Eigen::Vector4d b{1.0, 1.0, 0.0, 0.0};
  Eigen::Matrix<double, 16, 4> pinv;

  TpProjector() {
    for (int k = 0; k < 16; ++k) {
      Eigen::Matrix<double, 16, 1> e = Eigen::Matrix<double, 16, 1>::Zero();
      e(k) = 1.0;
      m.col(k) = constraint(from_coords(e));
    }
    pinv = m.transpose() * (m * m.transpose()).inverse();
  }
  static Eigen::Vector4d constraint(const Eigen::Matrix4cd& chi) {
    const Eigen::Matrix2cd a = tp_image(chi);
    return {a(0, 0).real(), a(1, 1).real(), a(0, 1).real(), a(0, 1).imag()};
  }
  Eigen::Matrix4cd project(const Eigen::Matrix4cd& chi) const {
    const Eigen::Matrix<double, 16, 1> x = to_coords(chi);
    return from_coords(x - pinv * (m * x - b));
  }
  double residual(const Eigen::Matrix4cd& chi) const {
    return (m * to_coords(chi) - b).norm();
  }
};

}  // namespace

Eigen::Matrix4cd chi_from_images(const Eigen::Matrix2cd& e0, const Eigen::Matrix2cd& e1,
                                 const Eigen::Matrix2cd& eplus, const Eigen::Matrix2cd& eplus_i) {
  const cd i(0.0, 1.0);
  const Eigen::Matrix2cd r1 = e0;
  const Eigen::Matrix2cd r4 = e1;
  const Eigen::Matrix2cd r2 = eplus + i * eplus_i - 0.5 * (1.0 + i) * (r1 + r4);
  const Eigen::Matrix2cd r3 = eplus - i * eplus_i - 0.5 * (1.0 - i) * (r1 + r4);
  Eigen::Matrix4cd block;
  block << r1, r2, r3, r4;
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity(), x;
  x << 0, 1, 1, 0;
  Eigen::Matrix4cd lambda;
  lambda << id, x, x, -id;
  lambda *= 0.5;
  return lambda * block * lambda;
}

Eigen::Matrix4cd project_cptp(const Eigen::Matrix4cd& chi, double* distance) {
  static const TpProjector tp;
  const Eigen::Matrix4cd h = 0.5 * (chi + chi.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() >= -1e-12 && tp.residual(h) < 1e-10) {
    if (distance) *distance = (chi - h).norm();
    return h;
  }
  Eigen::Matrix4cd x = h, p = Eigen::Matrix4cd::Zero(), q = Eigen::Matrix4cd::Zero();
  for (int it = 0; it < 20000; ++it) {
    const Eigen::Matrix4cd y = project_psd(x + p);
    p = x + p - y;
    const Eigen::Matrix4cd xn = tp.project(y + q);
    q = y + q - xn;
    const double change = (xn - x).norm();
    x = xn;
    if (change < 1e-14) break;
  }
  if (distance) *distance = (chi - x).norm();
  return x;
}

ProcessFidelity pst_process_fidelity(const ChainSpec& spec, const NoiseChannelSet& channels,
                                     const Schedule& schedule) {
  const int n = spec.n_sites;
  const SiteGraph graph = site_graph(spec);
  const cd i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Eigen::VectorXcd, 4> inputs;
  for (auto& v : inputs) v = Eigen::VectorXcd::Zero(n + 1);
  inputs[0](0) = 1.0;
  inputs[1](1) = 1.0;
  inputs[2](0) = r;
  inputs[2](1) = r;
  inputs[3](0) = r;
  inputs[3](1) = i * r;
  std::array<Eigen::Matrix2cd, 4> images;
  for (int k = 0; k < 4; ++k) {
    const QuantumState rho0(Basis::SingleExcitation, n,
                            Eigen::MatrixXcd(inputs[k] * inputs[k].adjoint()));
    const Trajectory tr = evolve_lindblad(schedule, graph, rho0, channels,
                                          Basis::SingleExcitation);
    images[k] = reduce_to_sites(tr.final_state(), {n}).matrix();
  }
  ProcessFidelity out;
  const Eigen::Matrix4cd raw = chi_from_images(images[0], images[1], images[2], images[3]);
  out.chi = project_cptp(raw, &out.projection_distance);
  out.fidelity = out.chi(0, 0).real();
  return out;
}

// ---------------------------------------------------------------------------
// Degradation sweep

DegradationCurve degradation_sweep(const DegradationSetup& setup) {
  if (setup.n_samples < 2) throw Error(ErrorKind::Precondition, "n_samples must be >= 2");
  const ChainSpec clean = fst_chain(setup.fst);
  const double plateau = fst_plateau(setup.fst).plateau;
  auto fidelity = [&](const ChainSpec& spec) {
    if (setup.measure == FidelityMeasure::Bell) {
      return run_fst_with(spec, setup.fst, plateau, setup.channels).bell.value;
    }
    const SiteGraph g = site_graph(spec);
    const Schedule s = setup.fst.ideal
                           ? static_schedule(g, transfer_time(mhz_to_angular(setup.fst.f_j_mhz)),
                                             setup.fst.timing.dt)
                           : make_schedule(g, setup.fst.timing, plateau);
    return pst_process_fidelity(spec, setup.channels, s).fidelity;
  };

  DegradationCurve curve;
  curve.n_samples = setup.n_samples;
  curve.sigma_grid = setup.sigma_grid_mhz;
  curve.baseline = fidelity(sample_noisy_spec(clean, {setup.target, 0.0}, NoiseKey{setup.seed, 0, 0}));

  for (size_t si = 0; si < setup.sigma_grid_mhz.size(); ++si) {
    const NoiseModel model{setup.target, setup.sigma_grid_mhz[si]};
    std::vector<double> f(static_cast<size_t>(setup.n_samples), curve.baseline);
    if (model.sigma_mhz != 0.0) {
      parallel_for(f.size(), setup.threads, [&](std::size_t k) {
        const NoiseKey key{setup.seed, si, k};
        f[k] = fidelity(sample_noisy_spec(clean, model, key));
      });
    }
    std::vector<double> ratio(f.size());
    for (size_t k = 0; k < f.size(); ++k) ratio[k] = f[k] / curve.baseline;
    const double mean = pairwise_sum(ratio.begin(), ratio.end()) / double(ratio.size());
    std::vector<double> dev(ratio.size());
    for (size_t k = 0; k < ratio.size(); ++k) dev[k] = (ratio[k] - mean) * (ratio[k] - mean);
    const double sd = std::sqrt(pairwise_sum(dev.begin(), dev.end()) / double(ratio.size() - 1));
    curve.mean_ratio.push_back(mean);
    curve.std.push_back(sd);
    curve.sem.push_back(sd / std::sqrt(double(ratio.size())));
    curve.samples.push_back(f);
  }
  return curve;
}

}  // namespace zigzag
