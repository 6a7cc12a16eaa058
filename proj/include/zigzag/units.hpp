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

#ifndef ZIGZAG_UNITS_HPP
#define ZIGZAG_UNITS_HPP

#include <numbers>

namespace zigzag {

// Internal units: time in ns, angular frequency in rad/ns.
// External units: ordinary frequency in MHz, T1/T2 in microseconds.

inline constexpr double kPi = std::numbers::pi;

/// MHz -> rad/ns.
constexpr double mhz_to_angular(double f_mhz) { return 2.0 * kPi * f_mhz * 1e-3; }

/// rad/ns -> MHz.
constexpr double angular_to_mhz(double w) { return w / (2.0 * kPi * 1e-3); }

constexpr double us_to_ns(double t_us) { return t_us * 1e3; }

}  // namespace zigzag

#endif  // ZIGZAG_UNITS_HPP
