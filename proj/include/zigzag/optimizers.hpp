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

#ifndef ZIGZAG_OPTIMIZERS_HPP
#define ZIGZAG_OPTIMIZERS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace zigzag {

// Derivative-free minimizers. One objective call is one iteration; every
// call is recorded in the trace in the order it was issued.

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Evaluation {
  Eigen::VectorXd x;
  double cost = 0.0;
  double best = 0.0;  ///< best-so-far after this evaluation
};

struct OptimizerTrace {
  std::vector<Evaluation> evaluations;

  int size() const { return static_cast<int>(evaluations.size()); }
  /// 1-based index of the first evaluation whose best-so-far is within
  /// tol of the final best; 0 for an empty trace.
  int stabilization_index(double tol) const;
  bool best_non_increasing() const;
};

struct OptimizeResult {
  Eigen::VectorXd x;
  double cost = 0.0;
  OptimizerTrace trace;
  bool aborted = false;  ///< objective threw; trace kept up to the failure
  std::string error;
};

enum class OptimizerMethod { NelderMead, DifferentialEvolution };
const char* optimizer_method_name(OptimizerMethod m);
OptimizerMethod parse_optimizer_method(const std::string& name);

struct NelderMeadOptions {
  int budget = 300;
  double f_tol = 1e-10;  ///< stop when the simplex cost spread drops below
  double x_tol = 1e-10;  ///< and its diameter drops below
};

/// Adaptive Nelder-Mead (dimension-dependent coefficients). The initial
/// simplex is x0 plus step(i) along each axis.
OptimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& step, const NelderMeadOptions& options = {});

struct DifferentialEvolutionOptions {
  int budget = 600;
  int population = 15;
  double f_weight = 0.6;
  double crossover = 0.8;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// rand/1/bin inside the box x0 +/- half_width. Member 0 of the initial
/// population is x0; the rest are uniform in the box.
OptimizeResult differential_evolution(const Objective& f, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& half_width,
                                      const DifferentialEvolutionOptions& options = {});

}  // namespace zigzag

#endif  // ZIGZAG_OPTIMIZERS_HPP
