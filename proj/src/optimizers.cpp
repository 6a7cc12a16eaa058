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

#include "zigzag/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"

namespace zigzag {

int OptimizerTrace::stabilization_index(double tol) const {
  if (evaluations.empty()) return 0;
  const double final_best = evaluations.back().best;
  for (size_t i = 0; i < evaluations.size(); ++i) {
    if (evaluations[i].best <= final_best + tol) return static_cast<int>(i) + 1;
  }
  return size();
}

bool OptimizerTrace::best_non_increasing() const {
  for (size_t i = 1; i < evaluations.size(); ++i) {
    if (evaluations[i].best > evaluations[i - 1].best) return false;
  }
  return true;
}

const char* optimizer_method_name(OptimizerMethod m) {
  return m == OptimizerMethod::NelderMead ? "nelder_mead" : "differential_evolution";
}

OptimizerMethod parse_optimizer_method(const std::string& name) {
  if (name == "nelder_mead") return OptimizerMethod::NelderMead;
  if (name == "differential_evolution") return OptimizerMethod::DifferentialEvolution;
  throw Error(ErrorKind::Schema, "unknown optimizer method '" + name + "'");
}

namespace {

struct BudgetExhausted {};

class Recorder {
 public:
  Recorder(const Objective& f, int budget, OptimizeResult& out)
      : f_(f), budget_(budget), out_(out) {
    if (budget < 1) throw Error(ErrorKind::Precondition, "budget must be >= 1");
  }

  double operator()(const Eigen::VectorXd& x) {
    if (out_.trace.size() >= budget_) throw BudgetExhausted{};
    return record(x, f_(x));
  }

  double record(const Eigen::VectorXd& x, double cost) {
    const double prev = out_.trace.evaluations.empty()
                            ? std::numeric_limits<double>::infinity()
                            : out_.trace.evaluations.back().best;
    if (cost < prev || out_.trace.evaluations.empty()) {
      out_.x = x;
      out_.cost = cost;
    }
    out_.trace.evaluations.push_back({x, cost, std::min(prev, cost)});
    return cost;
  }

  int remaining() const { return budget_ - out_.trace.size(); }

 private:
  const Objective& f_;
  int budget_;
  OptimizeResult& out_;
};

template <class Body>
OptimizeResult guarded(Body&& body) {
  OptimizeResult out;
  try {
    body(out);
  } catch (const BudgetExhausted&) {
  } catch (const std::exception& e) {
    out.aborted = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

OptimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& step, const NelderMeadOptions& options) {
  if (step.size() != x0.size() || x0.size() == 0) {
    throw Error(ErrorKind::Precondition, "step and x0 must have equal, non-zero size");
  }
  if (options.budget < 1) throw Error(ErrorKind::Precondition, "budget must be >= 1");
  return guarded([&](OptimizeResult& out) {
    Recorder eval(f, options.budget, out);
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, beta = 1.0 + 2.0 / n, gamma = 0.75 - 0.5 / n, delta = 1.0 - 1.0 / n;

    std::vector<Eigen::VectorXd> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    fs[0] = eval(x0);
    for (int i = 0; i < n; ++i) {
      xs[i + 1](i) += step(i);
      fs[i + 1] = eval(xs[i + 1]);
    }
    std::vector<int> order(n + 1);
    for (;;) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
      std::vector<Eigen::VectorXd> sx(n + 1);
      std::vector<double> sf(n + 1);
      for (int i = 0; i <= n; ++i) {
        sx[i] = xs[order[i]];
        sf[i] = fs[order[i]];
      }
      xs.swap(sx);
      fs.swap(sf);

      double diameter = 0.0;
      for (int i = 1; i <= n; ++i) diameter = std::max(diameter, (xs[i] - xs[0]).lpNorm<Eigen::Infinity>());
      if (fs[n] - fs[0] <= options.f_tol && diameter <= options.x_tol) return;

      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) c += xs[i];
      c /= n;

      const Eigen::VectorXd xr = c + alpha * (c - xs[n]);
      const double fr = eval(xr);
      if (fr < fs[0]) {
        const Eigen::VectorXd xe = c + beta * (xr - c);
        const double fe = eval(xe);
        if (fe < fr) {
          xs[n] = xe;
          fs[n] = fe;
        } else {
          xs[n] = xr;
          fs[n] = fr;
        }
        continue;
      }
      if (fr < fs[n - 1]) {
        xs[n] = xr;
        fs[n] = fr;
        continue;
      }
      bool shrink = false;
      if (fr < fs[n]) {
        const Eigen::VectorXd xc = c + gamma * (xr - c);
        const double fc = eval(xc);
        if (fc <= fr) {
          xs[n] = xc;
          fs[n] = fc;
        } else {
          shrink = true;
        }
      } else {
        const Eigen::VectorXd xc = c + gamma * (xs[n] - c);
        const double fc = eval(xc);
        if (fc < fs[n]) {
          xs[n] = xc;
          fs[n] = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (int i = 1; i <= n; ++i) {
          xs[i] = xs[0] + delta * (xs[i] - xs[0]);
          fs[i] = eval(xs[i]);
        }
      }
    }
  });
}

OptimizeResult differential_evolution(const Objective& f, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& half_width,
                                      const DifferentialEvolutionOptions& options) {
  if (half_width.size() != x0.size() || x0.size() == 0) {
    throw Error(ErrorKind::Precondition, "half_width and x0 must have equal, non-zero size");
  }
  if (options.population < 4) throw Error(ErrorKind::Precondition, "population must be >= 4");
  if (options.budget < 1) throw Error(ErrorKind::Precondition, "budget must be >= 1");
  return guarded([&](OptimizeResult& out) {
    Recorder rec(f, options.budget, out);
    const int n = static_cast<int>(x0.size());
    const int np = options.population;
    const Eigen::VectorXd lo = x0 - half_width, hi = x0 + half_width;
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(options.seed >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Evaluates a batch in parallel, records in batch order. Returns false
    // when the budget ran out part-way.
    auto evaluate = [&](const std::vector<Eigen::VectorXd>& batch, std::vector<double>& costs) {
      const size_t k = std::min<size_t>(batch.size(), static_cast<size_t>(rec.remaining()));
      costs.assign(k, 0.0);
      parallel_for(k, options.threads, [&](std::size_t i) { costs[i] = f(batch[i]); });
      for (size_t i = 0; i < k; ++i) rec.record(batch[i], costs[i]);
      return k == batch.size();
    };

    std::vector<Eigen::VectorXd> pop(np, x0);
    for (int i = 1; i < np; ++i) {
      for (int d = 0; d < n; ++d) pop[i](d) = lo(d) + unit(rng) * (hi(d) - lo(d));
    }
    std::vector<double> fit;
    if (!evaluate(pop, fit)) return;

    std::uniform_int_distribution<int> pick(0, np - 1), dim(0, n - 1);
    for (;;) {
      std::vector<Eigen::VectorXd> trial(np);
      for (int i = 0; i < np; ++i) {
        int r1, r2, r3;
        do r1 = pick(rng); while (r1 == i);
        do r2 = pick(rng); while (r2 == i || r2 == r1);
        do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
        const Eigen::VectorXd mutant = pop[r1] + options.f_weight * (pop[r2] - pop[r3]);
        trial[i] = pop[i];
        const int jr = dim(rng);
        for (int d = 0; d < n; ++d) {
          if (d == jr || unit(rng) < options.crossover) {
            trial[i](d) = std::clamp(mutant(d), lo(d), hi(d));
          }
        }
      }
      std::vector<double> tf;
      const bool complete = evaluate(trial, tf);
      for (size_t i = 0; i < tf.size(); ++i) {
        if (tf[i] <= fit[i]) {
          pop[i] = trial[i];
          fit[i] = tf[i];
        }
      }
      if (!complete || rec.remaining() == 0) return;
    }
  });
}

}  // namespace zigzag
