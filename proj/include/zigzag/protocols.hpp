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

#ifndef ZIGZAG_PROTOCOLS_HPP
#define ZIGZAG_PROTOCOLS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "zigzag/chain_model.hpp"
#include "zigzag/dynamics.hpp"
#include "zigzag/metrics.hpp"
#include "zigzag/pulse.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

// End-to-end transfer protocols: spec -> pulse schedule -> evolution ->
// readout. Used by the runner, the noise harness and the optimizer.

/// Score of a final pure state, maximized by plateau calibration.
using PlateauObjective = std::function<double(const QuantumState&)>;

struct PlateauSearch {
  double half_width = 3.0;  ///< ns around the area-matched plateau
  double grid_step = 0.25;  ///< ns
  double tolerance = 1e-3;  ///< ns, golden-section stop
};

struct PlateauCalibration {
  double plateau = 0.0;
  double score = 0.0;
  int evaluations = 0;
};

/// Plateau that maximizes the objective on the dissipation-free schedule.
/// Starts from tau - 2 * edge_area(coupler sigma), scans a grid, then
/// refines the best cell by golden-section search.
PlateauCalibration calibrate_plateau(const SiteGraph& graph, const PulseTiming& timing,
                                     double tau, const QuantumState& psi0,
                                     const PlateauObjective& objective,
                                     const PlateauSearch& search = {});

/// Maximizer of a unimodal function on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol, int* evaluations = nullptr);

/// Fixed readout frame for the 1D FST Bell pair: a virtual Z(pi) on the far
/// qubit maps the ideal (|01> + |10>)/sqrt(2) output onto the singlet.
inline constexpr double kFarQubitFramePhase = kPi;

/// Bell report on sites (1, N) in the fixed readout frame.
FidelityReport fst_bell_readout(const QuantumState& final_state, int n_sites);

/// Corner sites of a grid, 1-based, row-major: (1,1), (1,C), (R,1), (R,C).
std::vector<int> corner_sites(int rows, int cols);
/// Sites with at least one even (1-based) coordinate.
std::vector<int> even_sites(int rows, int cols);

struct FstSetup {
  int n_sites = 5;
  int m = 0;
  double f_j_mhz = 9.0;
  double theta = kPi / 8.0;
  PulseTiming timing;
  std::optional<double> plateau_ns;  ///< calibrated when absent
  bool ideal = false;                ///< static Hamiltonian for tau, no pulses
};

ChainSpec fst_chain(const FstSetup& setup);

struct FstRun {
  ChainSpec spec;
  Schedule schedule;
  double tau = 0.0;
  PlateauCalibration plateau;
  Trajectory trajectory;
  FidelityReport bell;
  Eigen::VectorXd final_populations;
  double peak_even_population = 0.0;
};

/// Calibrates (or takes) the plateau for a setup.
PlateauCalibration fst_plateau(const FstSetup& setup);

FstRun run_fst(const FstSetup& setup, const NoiseChannelSet& channels,
               const EvolutionOptions& options = {});

/// Same pulses and plateau, arbitrary (e.g. noisy) chain parameters.
FstRun run_fst_with(const ChainSpec& spec, const FstSetup& setup, double plateau,
                    const NoiseChannelSet& channels, const EvolutionOptions& options = {});

struct LatticeSetup {
  int rows = 3;
  int cols = 3;
  int m = 0;
  double f_j_mhz = 9.0;
  double theta = kPi / 8.0;
  PulseTiming timing;
  std::optional<double> plateau_ns;
  bool ideal = false;
};

struct LatticeRun {
  LatticeSpec spec;
  double tau = 0.0;
  PlateauCalibration plateau;
  Trajectory trajectory;
  FidelityReport w;
  Eigen::VectorXd final_populations;
  double peak_even_population = 0.0;
};

LatticeRun run_lattice(const LatticeSetup& setup, const NoiseChannelSet& channels,
                       const EvolutionOptions& options = {});

struct PstSetup {
  int n_sites = 5;
  int m = 0;
  double f_j_mhz = 9.0;
  PulseTiming timing;
  std::optional<double> plateau_ns;
};

/// Paper-pulse schedule for PST, plateau maximizing the site-N population.
Schedule pst_schedule(const ChainSpec& spec, const PstSetup& setup,
                      PlateauCalibration* calibration = nullptr);

/// First m at which the curve, after its first dip, recovers F(m_0),
/// linearly interpolated between grid points. NaN when never reached.
double tradeoff_crossing(const std::vector<int>& ms, const std::vector<double>& f);

}  // namespace zigzag

#endif  // ZIGZAG_PROTOCOLS_HPP
