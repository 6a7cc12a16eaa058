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

#ifndef ZIGZAG_PULSE_HPP
#define ZIGZAG_PULSE_HPP

#include <vector>

#include "zigzag/chain_model.hpp"

namespace zigzag {

/// Where the 3-sigma Gaussian edge sits inside the buffer.
///   Inner: edge occupies [buffer - 3 sigma, buffer], adjacent to the plateau.
///   Outer: edge occupies [0, 3 sigma], value held until the plateau.
enum class EdgeAlignment { Inner, Outer };

const char* alignment_name(EdgeAlignment a);
EdgeAlignment parse_alignment(const char* name);

struct PulseShape {
  double sigma = 1.0;    ///< ns
  double buffer = 0.0;   ///< ns
  double plateau = 0.0;  ///< ns
  double amplitude = 1.0;
  EdgeAlignment alignment = EdgeAlignment::Inner;

  double duration() const { return plateau + 2.0 * buffer; }
  /// Interval on which the pulse equals its amplitude exactly.
  double flat_begin() const;
  double flat_end() const;
};

/// Normalized edge value at distance x from the flat part, x in [0, 3 sigma].
/// Truncated and rescaled so it is exactly 0 at 3 sigma and 1 at 0.
double gaussian_edge(double x, double sigma);

/// Integral of gaussian_edge over [0, 3 sigma].
double edge_area(double sigma);

/// Flattop Gaussian envelope. Zero outside [0, duration].
double flattop_gaussian(double t, const PulseShape& shape);

/// Throws Error(Precondition) on sigma <= 0, negative buffer or plateau,
/// or an outer edge longer than its buffer.
void validate(const PulseShape& shape);

struct PulseTiming {
  double qubit_sigma = 1.25;
  double coupler_sigma = 2.0;
  double buffer = 7.5;
  EdgeAlignment qubit_alignment = EdgeAlignment::Outer;
  EdgeAlignment coupler_alignment = EdgeAlignment::Inner;
  double dt = 0.05;
};

/// Per-parameter pulses for a site graph, one per onsite frequency and one
/// per edge (graph order). All pulses share t = 0 and the same duration.
struct Schedule {
  std::vector<PulseShape> frequency_pulses;
  std::vector<PulseShape> coupling_pulses;
  double duration = 0.0;
  double dt = 0.05;

  /// Largest interval on which every pulse is flat.
  double static_begin() const;
  double static_end() const;
};

Schedule make_schedule(const SiteGraph& graph, const PulseTiming& timing,
                       double plateau);

/// Square pulses: parameters held at their values over [0, duration].
Schedule static_schedule(const SiteGraph& graph, double duration,
                         double dt = 0.05);

/// Throws Error(Invariant) if the pulses disagree with the graph or do not
/// share the schedule duration.
void validate(const Schedule& schedule, const SiteGraph& graph);

/// Instantaneous graph parameters at time t.
SiteGraph graph_at(const Schedule& schedule, const SiteGraph& topology, double t);

}  // namespace zigzag

#endif  // ZIGZAG_PULSE_HPP
