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

#include "zigzag/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

const char* environment_scheme_name(EnvironmentScheme s) {
  return s == EnvironmentScheme::StaggeredAverage ? "staggered_average" : "extreme_detuned";
}

EnvironmentScheme parse_environment_scheme(const std::string& name) {
  if (name == "staggered_average") return EnvironmentScheme::StaggeredAverage;
  if (name == "extreme_detuned") return EnvironmentScheme::ExtremeDetuned;
  throw Error(ErrorKind::Schema, "unknown environment scheme '" + name + "'");
}

void CalibrationConfig::validate() const {
  if (!(coupling_threshold > 0.0) || !(frequency_threshold > 0.0)) {
    throw Error(ErrorKind::Precondition, "thresholds must be positive");
  }
  if (max_outer_iterations < 1 || max_inner_iterations < 1) {
    throw Error(ErrorKind::Precondition, "iteration caps must be >= 1");
  }
  if (radius < 0.0) throw Error(ErrorKind::Precondition, "radius must be non-negative");
  if (parallel_distance < std::max(1.0, radius)) {
    throw Error(ErrorKind::Precondition, "parallel distance must cover crosstalk and radius");
  }
  if (!(secant_perturbation > 0.0)) {
    throw Error(ErrorKind::Precondition, "secant perturbation must be positive");
  }
}

double secant_step(double z0, double v0, double z1, double v1, double target, double eps) {
  if (std::abs(v1 - v0) <= eps) {
    throw Error(ErrorKind::DegenerateSecant, "secant values coincide");
  }
  const double k = (z1 - z0) / (v1 - v0);
  return z1 + k * (target - v1);
}

double CalibrationReport::max_measured_residual() const {
  double r = 0.0;
  for (const auto& p : parameters) r = std::max(r, std::abs(p.measured_residual));
  return r;
}

double CalibrationReport::max_true_residual() const {
  double r = 0.0;
  for (const auto& p : parameters) r = std::max(r, std::abs(p.true_residual));
  return r;
}

int CalibrationReport::max_inner_iterations() const {
  int r = 0;
  for (const auto& p : parameters) r = std::max(r, p.max_inner_iterations);
  return r;
}

std::vector<std::vector<Element>> calibration_rounds(const std::vector<Element>& elements,
                                                     double d) {
  std::vector<std::vector<Element>> rounds;
  for (const Element& e : elements) {
    bool placed = false;
    for (auto& round : rounds) {
      const bool clear = std::all_of(round.begin(), round.end(), [&](const Element& o) {
        return std::abs(o.position() - e.position()) > d;
      });
      if (clear) {
        round.push_back(e);
        placed = true;
        break;
      }
    }
    if (!placed) rounds.push_back({e});
  }
  return rounds;
}

namespace {

double measure(DeviceModel& device, const Element& e, double z, const ExperimentGrid& grid) {
  return e.kind == Element::Coupler ? swap_experiment(device, e.index, z, grid)
                                    : ramsey_experiment(device, e.index, z, grid);
}

struct Attempt {
  double z = 0.0;
  double measured = 0.0;
  int experiments = 0;
  bool converged = false;
};

Attempt secant_attempt(DeviceModel& device, const Element& e, double target, double threshold,
                       double z_start, const CalibrationConfig& cfg) {
  const double lo = device.config().z_min, hi = device.config().z_max;
  Attempt a;
  double best_z = std::clamp(z_start, lo, hi);
  double best_r = std::numeric_limits<double>::infinity();
  auto probe = [&](double z) {
    const double v = measure(device, e, z, cfg.grid);
    ++a.experiments;
    if (std::abs(v - target) < best_r) {
      best_r = std::abs(v - target);
      best_z = z;
      a.measured = v;
    }
    return v;
  };
  double z0 = best_z;
  double v0 = probe(z0);
  if (best_r >= threshold && a.experiments < cfg.max_inner_iterations) {
    const double h = z0 + cfg.secant_perturbation <= hi ? cfg.secant_perturbation
                                                        : -cfg.secant_perturbation;
    double z1 = z0 + h;
    double v1 = probe(z1);
    while (best_r >= threshold && a.experiments < cfg.max_inner_iterations) {
      double z2;
      try {
        z2 = secant_step(z0, v0, z1, v1, target, cfg.secant_epsilon);
      } catch (const Error&) {
        z2 = z1 + (z1 + h <= hi && z1 + h >= lo ? h : -h);
      }
      z2 = std::clamp(z2, lo, hi);
      const double v2 = probe(z2);
      z0 = z1;
      v0 = v1;
      z1 = z2;
      v1 = v2;
    }
  }
  a.z = best_z;
  a.converged = best_r < threshold;
  device.set_zpa(e, a.z);
  return a;
}

struct UnitOutcome {
  double z = 0.0;
  double measured = 0.0;  ///< NaN when the Zpa is an average of attempts
  int max_inner = 0;
  int experiments = 0;
  bool converged = false;
};

struct StageContext {
  const CalibrationConfig& cfg;
  const std::vector<double>& targets;  ///< by element id
  std::vector<bool>& calibrated;       ///< by element id
};

UnitOutcome run_unit(DeviceModel& device, const Element& e, const StageContext& ctx) {
  const int nq = device.n_qubits();
  const double target = ctx.targets[e.id(nq)];
  const double threshold = e.kind == Element::Coupler ? ctx.cfg.coupling_threshold
                                                      : ctx.cfg.frequency_threshold;
  const double z_start =
      ctx.calibrated[e.id(nq)]
          ? device.zpa(e)
          : device.nominal_map(e).inverse(target, device.config().z_min, device.config().z_max);

  // Environment parking applies to the coupler stage; qubits have no
  // mutual crosstalk and see only frozen couplers.
  std::vector<int> env;
  for (int q = 0; q < nq && e.kind == Element::Coupler; ++q) {
    const Element o{Element::Qubit, q};
    if (o.id(nq) == e.id(nq) || ctx.calibrated[o.id(nq)]) continue;
    if (std::abs(o.position() - e.position()) <= ctx.cfg.radius) env.push_back(q);
  }
  Eigen::VectorXd saved(static_cast<Eigen::Index>(env.size()));
  for (size_t i = 0; i < env.size(); ++i) saved(i) = device.zpa({Element::Qubit, env[i]});
  auto park = [&](double sign) {
    for (int q : env) {
      double z = device.config().z_max;
      if (ctx.cfg.scheme == EnvironmentScheme::StaggeredAverage) {
        z = sign * ctx.cfg.stagger_zpa * (q % 2 == 0 ? 1.0 : -1.0);
      }
      device.set_zpa({Element::Qubit, q}, z);
    }
  };
  auto restore = [&]() {
    for (size_t i = 0; i < env.size(); ++i) device.set_zpa({Element::Qubit, env[i]}, saved(i));
  };

  UnitOutcome out;
  if (env.empty() || ctx.cfg.scheme == EnvironmentScheme::ExtremeDetuned) {
    park(1.0);
    const Attempt a = secant_attempt(device, e, target, threshold, z_start, ctx.cfg);
    restore();
    out = {a.z, a.measured, a.experiments, a.experiments, a.converged};
  } else {
    park(1.0);
    const Attempt a = secant_attempt(device, e, target, threshold, z_start, ctx.cfg);
    park(-1.0);
    const Attempt b = secant_attempt(device, e, target, threshold, a.z, ctx.cfg);
    restore();
    out.z = 0.5 * (a.z + b.z);
    out.measured = std::numeric_limits<double>::quiet_NaN();
    out.max_inner = std::max(a.experiments, b.experiments);
    out.experiments = a.experiments + b.experiments;
    out.converged = a.converged && b.converged;
  }
  device.set_zpa(e, out.z);
  return out;
}

struct ElementStats {
  int max_inner = 0;
  int experiments = 0;
  double measured = std::numeric_limits<double>::quiet_NaN();
};

void run_stage(DeviceModel& device, const std::vector<Element>& elements, const StageContext& ctx,
               std::vector<ElementStats>& stats) {
  const int nq = device.n_qubits();
  std::vector<Element> pending = elements;
  // First pass plus one recalibration pass for offenders.
  for (int pass = 0; pass < 2 && !pending.empty(); ++pass) {
    std::vector<Element> offenders;
    for (const auto& round : calibration_rounds(pending, ctx.cfg.parallel_distance)) {
      std::vector<UnitOutcome> outcomes(round.size());
      if (ctx.cfg.parallel) {
        std::vector<DeviceModel> local(round.size(), device);
        parallel_for(round.size(), ctx.cfg.threads,
                     [&](std::size_t i) { outcomes[i] = run_unit(local[i], round[i], ctx); });
        for (size_t i = 0; i < round.size(); ++i) {
          device.set_zpa(round[i], outcomes[i].z);
          device.set_calls(round[i], local[i].calls(round[i]));
          ctx.calibrated[round[i].id(nq)] = true;
        }
      } else {
        for (size_t i = 0; i < round.size(); ++i) {
          outcomes[i] = run_unit(device, round[i], ctx);
          ctx.calibrated[round[i].id(nq)] = true;
        }
      }
      for (size_t i = 0; i < round.size(); ++i) {
        ElementStats& s = stats[round[i].id(nq)];
        s.max_inner = std::max(s.max_inner, outcomes[i].max_inner);
        s.experiments += outcomes[i].experiments;
        s.measured = outcomes[i].measured;
        if (!outcomes[i].converged) offenders.push_back(round[i]);
      }
    }
    pending = offenders;
  }
}

}  // namespace

CalibrationReport calibrate_all(DeviceModel& device, const ChainSpec& targets,
                                const CalibrationConfig& config) {
  config.validate();
  validate(targets);
  const int nq = device.n_qubits();
  if (targets.n_sites != nq) {
    throw Error(ErrorKind::InvalidSize, "target chain and device sizes differ");
  }
  std::vector<double> target(static_cast<size_t>(device.n_elements()));
  std::vector<Element> couplers, qubits;
  for (int q = 0; q < nq; ++q) {
    target[q] = angular_to_mhz(targets.frequencies(q));
    qubits.push_back({Element::Qubit, q});
  }
  for (int c = 0; c < device.n_couplers(); ++c) {
    target[nq + c] = angular_to_mhz(targets.couplings(c));
    couplers.push_back({Element::Coupler, c});
  }
  std::vector<bool> calibrated(target.size(), false);
  std::vector<ElementStats> stats(target.size());
  const StageContext ctx{config, target, calibrated};

  CalibrationReport report;
  report.scheme = config.scheme;
  report.averaging = config.scheme == EnvironmentScheme::StaggeredAverage
                         ? "arithmetic mean of the Zpas calibrated with environment qubits "
                           "parked at +/- stagger_zpa"
                         : "single calibration with environment qubits parked at z_max";
  auto threshold = [&](const Element& e) {
    return e.kind == Element::Coupler ? config.coupling_threshold : config.frequency_threshold;
  };
  std::vector<Element> pending_couplers = couplers;
  for (int cycle = 1; cycle <= config.max_outer_iterations; ++cycle) {
    report.outer_cycles = cycle;
    run_stage(device, pending_couplers, ctx, stats);
    run_stage(device, qubits, ctx, stats);
    // Coupler check with all qubits at their working points.
    pending_couplers.clear();
    for (const Element& c : couplers) {
      ElementStats& s = stats[c.id(nq)];
      s.measured = measure(device, c, device.zpa(c), config.grid);
      ++s.experiments;
      if (!(std::abs(s.measured - target[c.id(nq)]) < threshold(c))) pending_couplers.push_back(c);
    }
    if (pending_couplers.empty()) break;
  }
  report.converged = true;
  std::vector<Element> order = couplers;
  order.insert(order.end(), qubits.begin(), qubits.end());
  for (const Element& e : order) {
    const ElementStats& s = stats[e.id(nq)];
    ParameterReport p;
    p.element = e;
    p.target = target[e.id(nq)];
    p.zpa = device.zpa(e);
    p.measured = s.measured;
    p.measured_residual = p.measured - p.target;
    p.true_value = device.true_value(e);
    p.true_residual = p.true_value - p.target;
    p.converged = std::abs(p.measured_residual) < threshold(e);
    p.max_inner_iterations = s.max_inner;
    p.experiments = s.experiments;
    report.converged = report.converged && p.converged;
    report.parameters.push_back(p);
  }
  report.qubit_zpas = device.qubit_zpas();
  report.coupler_zpas = device.coupler_zpas();
  return report;
}

}  // namespace zigzag
