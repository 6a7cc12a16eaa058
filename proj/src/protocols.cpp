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

#include "zigzag/protocols.hpp"

#include <cmath>
#include <limits>

#include "zigzag/errors.hpp"
#include "zigzag/spectral.hpp"

namespace zigzag {

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol, int* evaluations) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  int n = 2;
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
    ++n;
  }
  if (evaluations) *evaluations += n;
  return fc >= fd ? c : d;
}

PlateauCalibration calibrate_plateau(const SiteGraph& graph, const PulseTiming& timing,
                                     double tau, const QuantumState& psi0,
                                     const PlateauObjective& objective,
                                     const PlateauSearch& search) {
  auto score = [&](double plateau) {
    const Schedule s = make_schedule(graph, timing, plateau);
    return objective(evolve_schedule(s, graph, psi0).final_state());
  };
  const double base = tau - 2.0 * edge_area(timing.coupler_sigma);
  const int k = static_cast<int>(std::lround(search.half_width / search.grid_step));
  PlateauCalibration cal;
  double best = -std::numeric_limits<double>::infinity();
  double p0 = base;
  for (int i = -k; i <= k; ++i) {
    const double p = base + i * search.grid_step;
    if (p < 0.0) continue;
    const double v = score(p);
    ++cal.evaluations;
    if (v > best) {
      best = v;
      p0 = p;
    }
  }
  const double lo = std::max(0.0, p0 - search.grid_step);
  cal.plateau = golden_section_max(score, lo, p0 + search.grid_step, search.tolerance,
                                   &cal.evaluations);
  cal.score = score(cal.plateau);
  ++cal.evaluations;
  if (best > cal.score) {  // grid point beat the refinement (flat objective)
    cal.plateau = p0;
    cal.score = best;
  }
  return cal;
}

FidelityReport fst_bell_readout(const QuantumState& final_state, int n_sites) {
  const QuantumState pair = reduce_to_sites(final_state, {1, n_sites});
  FidelityReport rep = bell_fidelity(apply_local_phases(pair, {0.0, kFarQubitFramePhase}));
  rep.subsystem = {1, n_sites};
  return rep;
}

std::vector<int> corner_sites(int rows, int cols) {
  return {1, cols, (rows - 1) * cols + 1, rows * cols};
}

std::vector<int> even_sites(int rows, int cols) {
  std::vector<int> out;
  for (int r = 1; r <= rows; ++r) {
    for (int c = 1; c <= cols; ++c) {
      if (r % 2 == 0 || c % 2 == 0) out.push_back((r - 1) * cols + c);
    }
  }
  return out;
}

ChainSpec fst_chain(const FstSetup& setup) {
  const double j = mhz_to_angular(setup.f_j_mhz);
  ChainSpec base = setup.m == 0 ? build_line(setup.n_sites, j)
                                : build_zigzag(setup.n_sites, setup.m, j);
  return apply_fst_deformation(base, setup.theta);
}

namespace {

double peak_population(const Trajectory& traj, const std::vector<int>& sites) {
  double peak = 0.0;
  for (const auto& s : traj.states) {
    const Eigen::VectorXd p = populations(s);
    for (int k : sites) peak = std::max(peak, p(k - 1));
  }
  return peak;
}

std::vector<int> even_chain_sites(int n) {
  std::vector<int> out;
  for (int k = 2; k <= n; k += 2) out.push_back(k);
  return out;
}

}  // namespace

PlateauCalibration fst_plateau(const FstSetup& setup) {
  const double tau = transfer_time(mhz_to_angular(setup.f_j_mhz));
  if (setup.ideal) return {tau, std::numeric_limits<double>::quiet_NaN(), 0};
  if (setup.plateau_ns) return {*setup.plateau_ns, std::numeric_limits<double>::quiet_NaN(), 0};
  const ChainSpec spec = fst_chain(setup);
  const int n = setup.n_sites;
  auto objective = [n](const QuantumState& s) {
    return bell_fidelity(reduce_to_sites(s, {1, n})).phase_maximized_value;
  };
  return calibrate_plateau(site_graph(spec), setup.timing, tau,
                           site_state(Basis::SingleExcitation, n, 1), objective);
}

FstRun run_fst_with(const ChainSpec& spec, const FstSetup& setup, double plateau,
                    const NoiseChannelSet& channels, const EvolutionOptions& options) {
  FstRun run;
  run.spec = spec;
  run.tau = transfer_time(mhz_to_angular(setup.f_j_mhz));
  run.plateau.plateau = plateau;
  const SiteGraph graph = site_graph(spec);
  run.schedule = setup.ideal ? static_schedule(graph, run.tau, setup.timing.dt)
                             : make_schedule(graph, setup.timing, plateau);
  const QuantumState psi0 = site_state(Basis::SingleExcitation, spec.n_sites, 1);
  run.trajectory = evolve_lindblad(run.schedule, graph, psi0, channels,
                                   Basis::SingleExcitation, options);
  const QuantumState& out = run.trajectory.final_state();
  run.bell = fst_bell_readout(out, spec.n_sites);
  run.final_populations = populations(out);
  run.peak_even_population = peak_population(run.trajectory, even_chain_sites(spec.n_sites));
  return run;
}

FstRun run_fst(const FstSetup& setup, const NoiseChannelSet& channels,
               const EvolutionOptions& options) {
  const PlateauCalibration cal = fst_plateau(setup);
  FstRun run = run_fst_with(fst_chain(setup), setup, cal.plateau, channels, options);
  run.plateau = cal;
  return run;
}

LatticeRun run_lattice(const LatticeSetup& setup, const NoiseChannelSet& channels,
                       const EvolutionOptions& options) {
  LatticeRun run;
  const double j = mhz_to_angular(setup.f_j_mhz);
  run.spec = build_lattice(setup.rows, setup.cols, setup.m, j, setup.theta);
  run.tau = transfer_time(j);
  const SiteGraph graph = site_graph(run.spec);
  const int n = graph.size();
  const QuantumState psi0 = site_state(Basis::SingleExcitation, n, 1);
  const std::vector<int> corners = corner_sites(setup.rows, setup.cols);
  Schedule schedule;
  if (setup.ideal) {
    run.plateau = {run.tau, std::numeric_limits<double>::quiet_NaN(), 0};
    schedule = static_schedule(graph, run.tau, setup.timing.dt);
  } else {
    if (setup.plateau_ns) {
      run.plateau = {*setup.plateau_ns, std::numeric_limits<double>::quiet_NaN(), 0};
    } else {
      auto objective = [&corners](const QuantumState& s) {
        return w_fidelity(reduce_to_sites(s, corners)).value;
      };
      run.plateau = calibrate_plateau(graph, setup.timing, run.tau, psi0, objective);
    }
    schedule = make_schedule(graph, setup.timing, run.plateau.plateau);
  }
  run.trajectory = evolve_lindblad(schedule, graph, psi0, channels,
                                   Basis::SingleExcitation, options);
  const QuantumState& out = run.trajectory.final_state();
  run.w = w_fidelity(reduce_to_sites(out, corners));
  run.w.subsystem = corners;
  run.final_populations = populations(out);
  run.peak_even_population = peak_population(run.trajectory, even_sites(setup.rows, setup.cols));
  return run;
}

Schedule pst_schedule(const ChainSpec& spec, const PstSetup& setup,
                      PlateauCalibration* calibration) {
  const SiteGraph graph = site_graph(spec);
  PlateauCalibration cal;
  if (setup.plateau_ns) {
    cal = {*setup.plateau_ns, std::numeric_limits<double>::quiet_NaN(), 0};
  } else {
    const int n = spec.n_sites;
    auto objective = [n](const QuantumState& s) { return populations(s)(n - 1); };
    cal = calibrate_plateau(graph, setup.timing, transfer_time(mhz_to_angular(setup.f_j_mhz)),
                            site_state(Basis::SingleExcitation, n, 1), objective);
  }
  if (calibration) *calibration = cal;
  return make_schedule(graph, setup.timing, cal.plateau);
}

double tradeoff_crossing(const std::vector<int>& ms, const std::vector<double>& f) {
  if (ms.size() != f.size() || f.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const double ref = f.front();
  size_t i = 1;
  while (i < f.size() && f[i] >= ref) ++i;  // find the dip
  for (size_t k = i + 1; k < f.size(); ++k) {
    if (f[k] >= ref) {
      const double t = (ref - f[k - 1]) / (f[k] - f[k - 1]);
      return ms[k - 1] + t * (ms[k] - ms[k - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace zigzag
