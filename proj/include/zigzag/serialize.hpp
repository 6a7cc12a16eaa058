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

#ifndef ZIGZAG_SERIALIZE_HPP
#define ZIGZAG_SERIALIZE_HPP

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "zigzag/calibration.hpp"
#include "zigzag/chain_model.hpp"
#include "zigzag/dynamics.hpp"
#include "zigzag/feedback.hpp"
#include "zigzag/metrics.hpp"
#include "zigzag/noise.hpp"
#include "zigzag/spectral.hpp"

namespace zigzag {

using Json = nlohmann::json;

/// Shortest round-trip decimal form; stable across runs and platforms.
std::string format_number(double v);
/// v rounded to the given number of decimals (for MHz fields).
double round_to(double v, int decimals);

Json to_json(const ChainSpec& spec);
Json to_json(const LatticeSpec& spec);
/// Inverse of to_json(ChainSpec), up to the 6-decimal rounding.
ChainSpec chain_from_json(const Json& j);

Json to_json(const HamiltonianMatrix& h);
/// {"re": [[...]], "im": [[...]]}.
Json density_json(const QuantumState& s);
Json to_json(const FidelityReport& r);
Json to_json(const PstConditionReport& r);
Json to_json(const CalibrationReport& r);
Json to_json(const OptimizerTrace& t);
Json to_json(const SampledPopulations& s);

/// Header `t_ns,P_site1..P_siteK,trace,purity`.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// Header `sigma_mhz,mean_ratio,std,n_samples,sem`.
void write_curve_csv(std::ostream& os, const DegradationCurve& curve);

/// Minimal CSV table writer with shortest-form numbers.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ostream& os_;
  bool first_ = true;
};

}  // namespace zigzag

#endif  // ZIGZAG_SERIALIZE_HPP
