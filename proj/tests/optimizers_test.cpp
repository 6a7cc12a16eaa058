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

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "zigzag/errors.hpp"
#include "zigzag/optimizers.hpp"

using namespace zigzag;

namespace {

double rosenbrock(const Eigen::VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    s += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
  }
  return s;
}

double shifted_sphere(const Eigen::VectorXd& x) {
  return (x - Eigen::VectorXd::LinSpaced(x.size(), 0.1, 0.5)).squaredNorm();
}

bool traces_equal(const OptimizerTrace& a, const OptimizerTrace& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.evaluations[i].cost != b.evaluations[i].cost) return false;
    if (a.evaluations[i].x != b.evaluations[i].x) return false;
  }
  return true;
}

}  // namespace

TEST(NelderMead, SolvesRosenbrock) {
  NelderMeadOptions opt;
  opt.budget = 3000;
  const OptimizeResult r =
      nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(0.5, 0.5), opt);
  EXPECT_FALSE(r.aborted);
  EXPECT_LT((r.x - Eigen::Vector2d(1.0, 1.0)).norm(), 1e-4);
  EXPECT_LT(r.cost, 1e-8);
  EXPECT_LE(r.trace.size(), opt.budget);
}

TEST(NelderMead, SolvesHigherDimensionalSphere) {
  NelderMeadOptions opt;
  opt.budget = 5000;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(8);
  const OptimizeResult r = nelder_mead(shifted_sphere, x0, Eigen::VectorXd::Constant(8, 0.3), opt);
  EXPECT_LT(r.cost, 1e-8);
}

TEST(NelderMead, TraceBookkeeping) {
  NelderMeadOptions opt;
  opt.budget = 40;
  const OptimizeResult r =
      nelder_mead(rosenbrock, Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(0.5, 0.5), opt);
  EXPECT_EQ(r.trace.size(), 40);
  EXPECT_TRUE(r.trace.best_non_increasing());
  EXPECT_EQ(r.trace.evaluations.front().x, Eigen::VectorXd(Eigen::Vector2d(-1.2, 1.0)));
  double best = INFINITY;
  for (const Evaluation& e : r.trace.evaluations) {
    EXPECT_EQ(e.cost, rosenbrock(e.x));
    best = std::min(best, e.cost);
    EXPECT_EQ(e.best, best);
  }
  EXPECT_EQ(r.cost, best);
  EXPECT_EQ(rosenbrock(r.x), best);
}

TEST(NelderMead, StartAtMinimumStays) {
  const OptimizeResult r = nelder_mead(shifted_sphere, Eigen::VectorXd::LinSpaced(3, 0.1, 0.5),
                                       Eigen::VectorXd::Constant(3, 0.1));
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_EQ(r.trace.evaluations.front().cost, 0.0);
  EXPECT_EQ(r.trace.stabilization_index(1e-12), 1);
}

TEST(NelderMead, AbortKeepsTrace) {
  int calls = 0;
  auto f = [&](const Eigen::VectorXd& x) {
    if (++calls == 7) throw std::runtime_error("simulated failure");
    return rosenbrock(x);
  };
  const OptimizeResult r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(0.5, 0.5));
  EXPECT_TRUE(r.aborted);
  EXPECT_EQ(r.error, "simulated failure");
  EXPECT_EQ(r.trace.size(), 6);
  EXPECT_TRUE(r.trace.best_non_increasing());
}

TEST(NelderMead, RejectsBadInput) {
  EXPECT_THROW(nelder_mead(rosenbrock, Eigen::Vector2d(0, 0), Eigen::Vector3d(1, 1, 1)), Error);
  NelderMeadOptions opt;
  opt.budget = 0;
  EXPECT_THROW(nelder_mead(rosenbrock, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), opt), Error);
}

TEST(DifferentialEvolution, SolvesSphere) {
  DifferentialEvolutionOptions opt;
  opt.budget = 4000;
  opt.seed = 3;
  const OptimizeResult r = differential_evolution(shifted_sphere, Eigen::VectorXd::Zero(4),
                                                  Eigen::VectorXd::Constant(4, 1.0), opt);
  EXPECT_LT(r.cost, 1e-6);
  EXPECT_EQ(r.trace.size(), opt.budget);
  EXPECT_TRUE(r.trace.best_non_increasing());
}

TEST(DifferentialEvolution, RespectsBox) {
  DifferentialEvolutionOptions opt;
  opt.budget = 500;
  // Unconstrained minimum at 0.1..0.5 lies outside the box [-1.05, -0.95].
  const OptimizeResult r = differential_evolution(shifted_sphere, Eigen::VectorXd::Constant(3, -1.0),
                                                  Eigen::VectorXd::Constant(3, 0.05), opt);
  for (const Evaluation& e : r.trace.evaluations) {
    EXPECT_LE(e.x.maxCoeff(), -0.95 + 1e-15);
    EXPECT_GE(e.x.minCoeff(), -1.05 - 1e-15);
  }
  EXPECT_NEAR(r.x.maxCoeff(), -0.95, 1e-3);
}

TEST(DifferentialEvolution, FirstMemberIsStart) {
  DifferentialEvolutionOptions opt;
  opt.budget = 20;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 0.25);
  const OptimizeResult r = differential_evolution(rosenbrock, x0, Eigen::VectorXd::Constant(2, 1.0), opt);
  EXPECT_EQ(r.trace.evaluations.front().x, x0);
  EXPECT_EQ(r.trace.size(), 20);
}

TEST(DifferentialEvolution, DeterministicAcrossThreads) {
  DifferentialEvolutionOptions a;
  a.budget = 300;
  a.seed = 9;
  DifferentialEvolutionOptions b = a;
  b.threads = 4;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3), w = Eigen::VectorXd::Constant(3, 2.0);
  const OptimizeResult ra = differential_evolution(rosenbrock, x0, w, a);
  const OptimizeResult rb = differential_evolution(rosenbrock, x0, w, b);
  EXPECT_TRUE(traces_equal(ra.trace, rb.trace));
  DifferentialEvolutionOptions c = a;
  c.seed = 10;
  EXPECT_FALSE(traces_equal(ra.trace, differential_evolution(rosenbrock, x0, w, c).trace));
}

TEST(DifferentialEvolution, AbortKeepsTrace) {
  std::atomic<int> calls{0};
  auto f = [&](const Eigen::VectorXd& x) {
    if (++calls > 30) throw std::runtime_error("device offline");
    return shifted_sphere(x);
  };
  DifferentialEvolutionOptions opt;
  opt.population = 10;
  const OptimizeResult r = differential_evolution(f, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2), opt);
  EXPECT_TRUE(r.aborted);
  EXPECT_EQ(r.error, "device offline");
  EXPECT_GE(r.trace.size(), 10);
  EXPECT_LE(r.trace.size(), 30);
}

TEST(DifferentialEvolution, RejectsSmallPopulation) {
  DifferentialEvolutionOptions opt;
  opt.population = 3;
  EXPECT_THROW(differential_evolution(rosenbrock, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), opt),
               Error);
}

TEST(Trace, StabilizationIndex) {
  OptimizerTrace t;
  EXPECT_EQ(t.stabilization_index(0.1), 0);
  for (double b : {5.0, 3.0, 1.0, 0.95, 0.95, 0.9}) t.evaluations.push_back({Eigen::VectorXd(), b, b});
  EXPECT_EQ(t.stabilization_index(0.1), 3);
  EXPECT_EQ(t.stabilization_index(0.0), 6);
  EXPECT_TRUE(t.best_non_increasing());
  t.evaluations.push_back({Eigen::VectorXd(), 2.0, 2.0});
  EXPECT_FALSE(t.best_non_increasing());
}

TEST(Method, NamesRoundTrip) {
  for (OptimizerMethod m : {OptimizerMethod::NelderMead, OptimizerMethod::DifferentialEvolution}) {
    EXPECT_EQ(parse_optimizer_method(optimizer_method_name(m)), m);
  }
  EXPECT_THROW(parse_optimizer_method("cmaes"), Error);
}
