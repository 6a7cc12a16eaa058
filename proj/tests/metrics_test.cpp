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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zigzag/chain_model.hpp"
#include "zigzag/dynamics.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/metrics.hpp"
#include "zigzag/protocols.hpp"
#include "zigzag/spectral.hpp"
#include "zigzag/units.hpp"

using namespace zigzag;

namespace {

using cd = std::complex<double>;
constexpr double kJ = 0.0565;

QuantumState pure(int qubits, const Eigen::VectorXcd& v) { return QuantumState(Basis::Full, qubits, v); }

QuantumState mixed(int qubits, const Eigen::MatrixXcd& rho) {
  return QuantumState(Basis::Full, qubits, rho);
}

Eigen::VectorXcd basis_vector(int dim, int index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(index) = 1.0;
  return v;
}

// diag(1, e^{i phi_q}) on every qubit, first qubit most significant.
Eigen::VectorXcd phase_vector(const Eigen::VectorXcd& v, const std::vector<double>& phases) {
  const int q = static_cast<int>(phases.size());
  Eigen::VectorXcd out = v;
  for (int b = 0; b < v.size(); ++b) {
    double phi = 0.0;
    for (int k = 0; k < q; ++k) {
      if ((b >> (q - 1 - k)) & 1) phi += phases[k];
    }
    out(b) *= std::polar(1.0, phi);
  }
  return out;
}

Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = cd(n(rng), n(rng));
  }
  Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST(Targets, Normalized) {
  EXPECT_NEAR(bell_singlet().norm(), 1.0, 1e-15);
  EXPECT_NEAR(w_state4().norm(), 1.0, 1e-15);
  EXPECT_NEAR(bell_singlet()(1).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(bell_singlet()(2).real(), -std::sqrt(0.5), 1e-15);
  for (int b : {1, 2, 4, 8}) EXPECT_NEAR(w_state4()(b).real(), 0.5, 1e-15);
}

TEST(BellFidelity, Examples) {
  const Eigen::VectorXcd minus = bell_singlet();
  const FidelityReport a = bell_fidelity(pure(2, minus));
  EXPECT_NEAR(a.value, 1.0, 1e-12);
  EXPECT_EQ(a.target, TargetKind::BellSinglet);
  const FidelityReport b = bell_fidelity(mixed(2, Eigen::MatrixXcd::Identity(4, 4) / 4.0));
  EXPECT_NEAR(b.value, 0.25, 1e-12);
  Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(4);
  plus(1) = plus(2) = std::sqrt(0.5);
  const FidelityReport c = bell_fidelity(pure(2, plus));
  EXPECT_NEAR(c.value, 0.0, 1e-12);
  EXPECT_NEAR(c.phase_maximized_value, 1.0, 1e-12);
}

TEST(WFidelity, Examples) {
  EXPECT_NEAR(w_fidelity(pure(4, w_state4())).value, 1.0, 1e-12);
  EXPECT_NEAR(w_fidelity(pure(4, basis_vector(16, 0b1000))).value, 0.25, 1e-12);
  EXPECT_NEAR(w_fidelity(pure(4, basis_vector(16, 0))).value, 0.0, 1e-12);
}

TEST(Fidelity, BoundsAndOrdering) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const FidelityReport b = bell_fidelity(mixed(2, random_density(4, rng)));
    EXPECT_GE(b.value, -1e-12);
    EXPECT_LE(b.value, b.phase_maximized_value + 1e-12);
    EXPECT_LE(b.phase_maximized_value, 1.0 + 1e-9);
    const FidelityReport w = w_fidelity(mixed(4, random_density(16, rng)));
    EXPECT_GE(w.value, -1e-12);
    EXPECT_LE(w.value, w.phase_maximized_value + 1e-12);
    EXPECT_LE(w.phase_maximized_value, 1.0 + 1e-9);
  }
}

TEST(Fidelity, PhaseMaximizationFindsRelativePhases) {
  const std::vector<double> phases{0.3, -1.1, 2.0, 0.7};
  const Eigen::VectorXcd v = phase_vector(w_state4(), phases);
  const FidelityReport r = w_fidelity(pure(4, v));
  EXPECT_LT(r.value, 0.99);
  EXPECT_NEAR(r.phase_maximized_value, 1.0, 1e-9);
}

TEST(Fidelity, LinearInDensity) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 20; ++i) {
    const Eigen::MatrixXcd a = random_density(4, rng), b = random_density(4, rng);
    const double p = 0.37;
    const double mix = bell_fidelity(mixed(2, p * a + (1 - p) * b)).value;
    const double lin = p * bell_fidelity(mixed(2, a)).value + (1 - p) * bell_fidelity(mixed(2, b)).value;
    EXPECT_NEAR(mix, lin, 1e-12);
  }
}

TEST(Fidelity, LocalPhaseInvariance) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> skew{u(rng), u(rng), u(rng), u(rng)};
    const Eigen::VectorXcd w = phase_vector(w_state4(), skew);
    const Eigen::MatrixXcd rho = 0.6 * w * w.adjoint() + 0.4 * random_density(16, rng);
    const std::vector<double> phases{u(rng), u(rng), u(rng), u(rng)};
    const QuantumState rotated = apply_local_phases(mixed(4, rho), phases);
    const Eigen::VectorXcd target = phase_vector(w_state4(), phases);
    EXPECT_NEAR(state_fidelity(rotated, target).value, w_fidelity(mixed(4, rho)).value, 1e-12);
    EXPECT_NEAR(w_fidelity(rotated).phase_maximized_value,
                w_fidelity(mixed(4, rho)).phase_maximized_value, 1e-9);
  }
}

TEST(ApplyLocalPhases, PureAndMixedAgree) {
  const Eigen::VectorXcd v = (basis_vector(4, 1) + basis_vector(4, 3)) / std::sqrt(2.0);
  const QuantumState a = apply_local_phases(pure(2, v), {0.4, 1.3});
  const QuantumState b = apply_local_phases(mixed(2, v * v.adjoint()), {0.4, 1.3});
  EXPECT_LT((a.density() - b.density()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(std::arg(a.density()(3, 1)), 0.4, 1e-14);
}

TEST(Reduce, FullBasisSiteOne) {
  const QuantumState r = reduce_to_sites(site_state(Basis::Full, 5, 1), {1, 5});
  EXPECT_EQ(r.n_sites(), 2);
  EXPECT_NEAR(r.density()(2, 2).real(), 1.0, 1e-14);  // |10>
  EXPECT_NEAR(r.trace(), 1.0, 1e-12);
}

TEST(Reduce, TruncatedEmbedding) {
  const QuantumState r = reduce_to_sites(site_state(Basis::SingleExcitation, 5, 1), {1, 5});
  EXPECT_NEAR(r.density()(2, 2).real(), 1.0, 1e-14);
  const QuantumState middle = reduce_to_sites(site_state(Basis::SingleExcitation, 5, 3), {1, 5});
  EXPECT_NEAR(middle.density()(0, 0).real(), 1.0, 1e-14);
  const QuantumState far = reduce_to_sites(site_state(Basis::SingleExcitation, 5, 5), {1, 5});
  EXPECT_NEAR(far.density()(1, 1).real(), 1.0, 1e-14);
}

TEST(Reduce, TruncatedMatchesFullPartialTrace) {
  const ChainSpec s = apply_fst_deformation(build_zigzag(5, 2, kJ), 0.3);
  const double t = 47.0;
  const QuantumState a = evolve_unitary(realize(s), site_state(Basis::SingleExcitation, 5, 1), t);
  const QuantumState b = evolve_unitary(realize(s, Basis::Full), site_state(Basis::Full, 5, 1), t);
  for (const std::vector<int>& sites : {std::vector<int>{1, 5}, std::vector<int>{2, 4, 5}}) {
    const Eigen::MatrixXcd ra = reduce_to_sites(a, sites).density();
    const Eigen::MatrixXcd rb = reduce_to_sites(b, sites).density();
    EXPECT_LT((ra - rb).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(ra.trace().real(), 1.0, 1e-9);
  }
}

TEST(Reduce, OutOfRangeThrows) {
  EXPECT_THROW(reduce_to_sites(site_state(Basis::SingleExcitation, 5, 1), {1, 6}), Error);
  EXPECT_THROW(reduce_to_sites(site_state(Basis::SingleExcitation, 5, 1), {0}), Error);
  EXPECT_THROW(reduce_to_sites(site_state(Basis::Full, 3, 1), {2, 2}), Error);
}

TEST(Populations, SiteStateAndVacuum) {
  const Eigen::VectorXd p = populations(site_state(Basis::SingleExcitation, 4, 1));
  EXPECT_EQ(p, Eigen::Vector4d(1, 0, 0, 0));
  EXPECT_EQ(vacuum_population(vacuum_state(Basis::SingleExcitation, 4)), 1.0);
  const QuantumState rho(Basis::SingleExcitation, 2,
                         Eigen::MatrixXcd(Eigen::Vector3cd(0.2, 0.5, 0.3).asDiagonal()));
  EXPECT_NEAR(populations(rho).sum() + vacuum_population(rho), 1.0, 1e-12);
}

TEST(Readout, IdealFstBellPair) {
  const ChainSpec s = apply_fst_deformation(build_zigzag(5, 4, kJ), kPi / 8.0);
  const QuantumState out =
      evolve_unitary(realize(s), site_state(Basis::SingleExcitation, 5, 1), transfer_time(kJ));
  EXPECT_GE(bell_fidelity(reduce_to_sites(out, {1, 5})).phase_maximized_value, 0.999);
  EXPECT_GE(fst_bell_readout(out, 5).value, 0.999);
  Eigen::VectorXd want(5);
  want << 0.5, 0, 0, 0, 0.5;
  EXPECT_LT((populations(out) - want).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Readout, IdealLatticeWState) {
  const LatticeSpec l = build_lattice(3, 3, 2, kJ, kPi / 8.0);
  const QuantumState out =
      evolve_unitary(realize(l), site_state(Basis::SingleExcitation, 9, 1), transfer_time(kJ));
  const FidelityReport w = w_fidelity(reduce_to_sites(out, corner_sites(3, 3)));
  EXPECT_GE(w.value, 0.999);
  EXPECT_GE(w.phase_maximized_value, 0.999);
}

TEST(EvenSites, ClosedFormBoundThreeSites) {
  // Zigzag N=3: peak P2 = 4 J1^2 / (Delta^2 + 8 J1^2), Delta = 2 m J.
  const int m = 6;
  const ChainSpec s = build_zigzag(3, m, kJ);
  const double j1 = s.couplings(0), delta = 2.0 * m * kJ;
  const double bound = 4.0 * j1 * j1 / (delta * delta + 8.0 * j1 * j1);
  const SiteGraph g = site_graph(s);
  EvolutionOptions opt;
  opt.record_interval = 0.05;
  const Trajectory tr = evolve_lindblad(static_schedule(g, transfer_time(kJ)), s,
                                        site_state(Basis::SingleExcitation, 3, 1),
                                        NoiseChannelSet::uniform(3, 16.0, 0.75),
                                        Basis::SingleExcitation, opt);
  double peak = 0.0;
  for (const auto& st : tr.states) peak = std::max(peak, populations(st)(1));
  EXPECT_LE(peak, bound + 1e-9);
  EXPECT_GT(peak, 0.9 * bound);
}

TEST(EvenSites, SuppressedAtLargeGap) {
  FstSetup setup;
  setup.n_sites = 5;
  setup.f_j_mhz = 9.0;
  EvolutionOptions opt;
  opt.record_interval = 0.05;
  double previous = 1.0;
  for (int m : {4, 10, 50}) {
    setup.m = m;
    const FstRun run = run_fst(setup, NoiseChannelSet::uniform(5, 16.0, 0.75), opt);
    EXPECT_LT(run.peak_even_population, previous);
    previous = run.peak_even_population;
  }
  EXPECT_LT(previous, 0.05);
}
