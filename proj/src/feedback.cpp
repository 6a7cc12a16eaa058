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

#include "zigzag/feedback.hpp"

#include <cmath>
#include <random>

#include "zigzag/errors.hpp"
#include "zigzag/spectral.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

void CostSpec::validate() const {
  if (samples < 1) throw Error(ErrorKind::Precondition, "cost needs L >= 1");
}

std::vector<double> CostSpec::sample_times(double tau) const {
  validate();
  std::vector<double> t;
  for (int l = 1; l <= samples; ++l) t.push_back((2.0 * l - 1.0) * tau);
  return t;
}

double population_cost(const std::vector<double>& p1, const std::vector<double>& pn) {
  if (p1.size() != pn.size() || p1.empty()) {
    throw Error(ErrorKind::Precondition, "population samples must be non-empty and paired");
  }
  double c = 0.0;
  for (size_t l = 0; l < p1.size(); ++l) {
    const double s = p1[l] + pn[l];
    c += s < 1e-6 ? 1.0 : std::abs(p1[l] - pn[l]) / s;
  }
  return c / static_cast<double>(p1.size());
}

namespace {

void unpack(const FeedbackProblem& p, const Eigen::VectorXd& x, Eigen::VectorXd& zq,
            Eigen::VectorXd& zc) {
  const int nq = p.device.n_qubits();
  if (x.size() != p.dimension()) throw Error(ErrorKind::InvalidSize, "free vector size mismatch");
  zq.resize(nq);
  zq(0) = p.fixed_qubit_zpa;
  zq.tail(nq - 1) = x.head(nq - 1);
  zc = x.tail(nq - 1);
}

}  // namespace

FeedbackProblem make_feedback_problem(const DeviceModel& device, const FstSetup& fst,
                                      const CostSpec& cost) {
  cost.validate();
  if (fst.n_sites != device.n_qubits()) {
    throw Error(ErrorKind::InvalidSize, "chain and device sizes differ");
  }
  FeedbackProblem p{device, fst, cost, 0.0, 0.0, 0.0, {}};
  const ChainSpec target = fst_chain(fst);
  Eigen::VectorXd zq, zc;
  device.solve_zpas(target.frequencies.unaryExpr([](double w) { return angular_to_mhz(w); }),
                    target.couplings.unaryExpr([](double w) { return angular_to_mhz(w); }), zq, zc);
  const int nq = device.n_qubits();
  p.fixed_qubit_zpa = zq(0);
  p.target_x.resize(p.dimension());
  p.target_x << zq.tail(nq - 1), zc;
  p.tau = transfer_time(mhz_to_angular(fst.f_j_mhz));
  p.plateau = fst_plateau(fst).plateau;
  return p;
}

ChainSpec chain_at(const FeedbackProblem& problem, const Eigen::VectorXd& x) {
  Eigen::VectorXd zq, zc, f, j;
  unpack(problem, x, zq, zc);
  problem.device.parameters_at(zq, zc, f, j);
  ChainSpec spec;
  spec.n_sites = problem.device.n_qubits();
  spec.frequencies = f.unaryExpr([](double v) { return mhz_to_angular(v); });
  spec.couplings = j.unaryExpr([](double v) { return mhz_to_angular(v); });
  spec.meta.kind = ChainKind::Custom;
  spec.meta.j = mhz_to_angular(problem.fst.f_j_mhz);
  spec.meta.m = problem.fst.m;
  spec.meta.theta = problem.fst.theta;
  return spec;
}

SampledPopulations sample_populations(const FeedbackProblem& problem, const Eigen::VectorXd& x) {
  const ChainSpec spec = chain_at(problem, x);
  const SiteGraph graph = site_graph(spec);
  const int n = spec.n_sites;
  const QuantumState psi0 = site_state(Basis::SingleExcitation, n, 1);
  SampledPopulations out;
  for (double t : problem.cost.sample_times(problem.tau)) {
    const Schedule s = make_schedule(graph, problem.fst.timing, problem.plateau + (t - problem.tau));
    const Eigen::VectorXd pop = populations(evolve_schedule(s, graph, psi0).final_state());
    out.times.push_back(s.duration);
    out.p1.push_back(pop(0));
    out.pn.push_back(pop(n - 1));
  }
  return out;
}

double feedback_cost(const FeedbackProblem& problem, const Eigen::VectorXd& x) {
  const SampledPopulations s = sample_populations(problem, x);
  return population_cost(s.p1, s.pn);
}

Eigen::VectorXd perturbed_start(const FeedbackProblem& problem, double delta_mhz,
                                std::uint64_t seed) {
  Eigen::VectorXd zq, zc, f, j;
  unpack(problem, problem.target_x, zq, zc);
  problem.device.parameters_at(zq, zc, f, j);
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), 0x70657274u};
  std::mt19937_64 rng(seq);
  std::bernoulli_distribution coin(0.5);
  for (int i = 1; i < f.size(); ++i) f(i) += coin(rng) ? delta_mhz : -delta_mhz;
  for (int c = 0; c < j.size(); ++c) j(c) += coin(rng) ? delta_mhz : -delta_mhz;
  // Qubit 1 keeps its Zpa; its frequency follows the crosstalk of the
  // shifted coupler, so iterate the solve on that frequency.
  Eigen::VectorXd f_now, j_now;
  for (int it = 0; it < 100; ++it) {
    problem.device.solve_zpas(f, j, zq, zc);
    if (std::abs(zq(0) - problem.fixed_qubit_zpa) < 1e-14) break;
    zq(0) = problem.fixed_qubit_zpa;
    problem.device.parameters_at(zq, zc, f_now, j_now);
    f(0) = f_now(0);
  }
  const int nq = problem.device.n_qubits();
  Eigen::VectorXd x(problem.dimension());
  x << zq.tail(nq - 1), zc;
  return x;
}

Eigen::VectorXd zpa_equivalent(const FeedbackProblem& problem, const Eigen::VectorXd& x,
                               double mhz) {
  const int nq = problem.device.n_qubits();
  Eigen::VectorXd step(x.size());
  for (int i = 0; i < x.size(); ++i) {
    const Element e = i < nq - 1 ? Element{Element::Qubit, i + 1}
                                 : Element{Element::Coupler, i - (nq - 1)};
    step(i) = mhz / problem.device.nominal_map(e).slope(x(i));
  }
  return step;
}

FeedbackOutcome optimize_feedback(const FeedbackProblem& problem, const Eigen::VectorXd& x0,
                                  const FeedbackOptions& options) {
  const Objective f = [&problem](const Eigen::VectorXd& x) { return feedback_cost(problem, x); };
  FeedbackOutcome out;
  out.x0 = x0;
  if (options.method == OptimizerMethod::NelderMead) {
    NelderMeadOptions nm;
    nm.budget = options.budget;
    out.result = nelder_mead(f, x0, zpa_equivalent(problem, x0, options.nm_step_mhz), nm);
  } else {
    DifferentialEvolutionOptions de;
    de.budget = options.budget;
    de.population = options.de_population;
    de.f_weight = options.de_f;
    de.crossover = options.de_cr;
    de.seed = options.seed;
    de.threads = options.threads;
    out.result = differential_evolution(f, x0, zpa_equivalent(problem, x0, options.de_box_mhz), de);
  }
  if (!out.result.trace.evaluations.empty()) {
    out.initial_cost = out.result.trace.evaluations.front().cost;
    out.stabilization_index = out.result.trace.stabilization_index(options.stabilization_tolerance);
    out.final_populations = sample_populations(problem, out.result.x);
  }
  return out;
}

}  // namespace zigzag
