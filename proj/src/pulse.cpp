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

#include "zigzag/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "zigzag/errors.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

namespace {
const double kEdgeFloor = std::exp(-4.5);  // Gaussian value at 3 sigma
}

const char* alignment_name(EdgeAlignment a) {
  return a == EdgeAlignment::Inner ? "inner" : "outer";
}

EdgeAlignment parse_alignment(const char* name) {
  if (std::strcmp(name, "inner") == 0) return EdgeAlignment::Inner;
  if (std::strcmp(name, "outer") == 0) return EdgeAlignment::Outer;
  throw Error(ErrorKind::Schema, std::string("unknown edge alignment '") + name + "'");
}

double PulseShape::flat_begin() const {
  return alignment == EdgeAlignment::Inner ? buffer : 3.0 * sigma;
}

double PulseShape::flat_end() const { return duration() - flat_begin(); }

double gaussian_edge(double x, double sigma) {
  if (x <= 0.0) return 1.0;
  if (x >= 3.0 * sigma) return 0.0;
  return (std::exp(-x * x / (2.0 * sigma * sigma)) - kEdgeFloor) / (1.0 - kEdgeFloor);
}

double edge_area(double sigma) {
  const double gauss = std::sqrt(kPi / 2.0) * std::erf(3.0 / std::sqrt(2.0));
  return sigma * (gauss - 3.0 * kEdgeFloor) / (1.0 - kEdgeFloor);
}

double flattop_gaussian(double t, const PulseShape& shape) {
  const double total = shape.duration();
  const double u = std::min(t, total - t);
  if (u < 0.0) return 0.0;
  double x;
  if (shape.alignment == EdgeAlignment::Inner) {
    if (u >= shape.buffer) return shape.amplitude;
    x = shape.buffer - u;
  } else {
    const double rise = 3.0 * shape.sigma;
    if (u >= rise) return shape.amplitude;
    x = rise - u;
  }
  return shape.amplitude * gaussian_edge(x, shape.sigma);
}

void validate(const PulseShape& shape) {
  if (!(shape.sigma > 0.0)) throw Error(ErrorKind::Precondition, "pulse sigma must be positive");
  if (shape.buffer < 0.0) throw Error(ErrorKind::Precondition, "pulse buffer must be non-negative");
  if (shape.plateau < 0.0) throw Error(ErrorKind::Precondition, "pulse plateau must be non-negative");
  if (shape.alignment == EdgeAlignment::Outer && 3.0 * shape.sigma > shape.buffer) {
    throw Error(ErrorKind::Precondition, "outer edge does not fit in the buffer");
  }
}

double Schedule::static_begin() const {
  double b = 0.0;
  for (const auto& p : frequency_pulses) b = std::max(b, p.flat_begin());
  for (const auto& p : coupling_pulses) b = std::max(b, p.flat_begin());
  return b;
}

double Schedule::static_end() const {
  double e = duration;
  for (const auto& p : frequency_pulses) e = std::min(e, p.flat_end());
  for (const auto& p : coupling_pulses) e = std::min(e, p.flat_end());
  return e;
}

Schedule make_schedule(const SiteGraph& graph, const PulseTiming& timing,
                       double plateau) {
  Schedule s;
  s.dt = timing.dt;
  for (int k = 0; k < graph.size(); ++k) {
    PulseShape p{timing.qubit_sigma, timing.buffer, plateau, graph.onsite(k),
                 timing.qubit_alignment};
    validate(p);
    s.frequency_pulses.push_back(p);
  }
  for (const auto& e : graph.edges) {
    PulseShape p{timing.coupler_sigma, timing.buffer, plateau, e.j,
                 timing.coupler_alignment};
    validate(p);
    s.coupling_pulses.push_back(p);
  }
  s.duration = plateau + 2.0 * timing.buffer;
  return s;
}

Schedule static_schedule(const SiteGraph& graph, double duration, double dt) {
  PulseTiming timing;
  timing.buffer = 0.0;
  timing.qubit_alignment = EdgeAlignment::Inner;
  timing.coupler_alignment = EdgeAlignment::Inner;
  timing.dt = dt;
  return make_schedule(graph, timing, duration);
}

void validate(const Schedule& schedule, const SiteGraph& graph) {
  if (static_cast<int>(schedule.frequency_pulses.size()) != graph.size() ||
      schedule.coupling_pulses.size() != graph.edges.size()) {
    throw Error(ErrorKind::Invariant, "schedule does not match the site graph");
  }
  if (!(schedule.dt > 0.0)) throw Error(ErrorKind::Precondition, "dt must be positive");
  auto check = [&](const PulseShape& p, double value) {
    validate(p);
    if (std::abs(p.duration() - schedule.duration) > 1e-9 * (1.0 + schedule.duration)) {
      throw Error(ErrorKind::Invariant, "pulses must share the schedule duration");
    }
    if (p.amplitude != value) {
      throw Error(ErrorKind::Invariant, "pulse amplitude differs from the spec parameter");
    }
  };
  for (int k = 0; k < graph.size(); ++k) check(schedule.frequency_pulses[k], graph.onsite(k));
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    check(schedule.coupling_pulses[e], graph.edges[e].j);
  }
}

SiteGraph graph_at(const Schedule& schedule, const SiteGraph& topology, double t) {
  SiteGraph g = topology;
  for (int k = 0; k < g.size(); ++k) {
    g.onsite(k) = flattop_gaussian(t, schedule.frequency_pulses[k]);
  }
  for (size_t e = 0; e < g.edges.size(); ++e) {
    g.edges[e].j = flattop_gaussian(t, schedule.coupling_pulses[e]);
  }
  return g;
}

}  // namespace zigzag
