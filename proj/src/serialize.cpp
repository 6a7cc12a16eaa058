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

#include "zigzag/serialize.hpp"

#include <charconv>
#include <cmath>

#include "zigzag/errors.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double round_to(double v, int decimals) {
  const double s = std::pow(10.0, decimals);
  const double r = std::round(v * s) / s;
  return r == 0.0 ? 0.0 : r;
}

namespace {

Json mhz_array(const Eigen::VectorXd& angular) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < angular.size(); ++i) a.push_back(round_to(angular_to_mhz(angular(i)), 6));
  return a;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const ChainSpec& spec) {
  return Json{{"kind", chain_kind_name(spec.meta.kind)},
              {"n_sites", spec.n_sites},
              {"frequencies_mhz", mhz_array(spec.frequencies)},
              {"couplings_mhz", mhz_array(spec.couplings)},
              {"m", spec.meta.m},
              {"j_mhz", round_to(angular_to_mhz(spec.meta.j), 6)},
              {"theta_rad", spec.meta.theta}};
}

Json to_json(const LatticeSpec& spec) {
  return Json{{"kind", "lattice"},
              {"rows", spec.rows},
              {"cols", spec.cols},
              {"row_chain", to_json(spec.row_chain)},
              {"col_chain", to_json(spec.col_chain)}};
}

ChainSpec chain_from_json(const Json& j) {
  try {
    ChainSpec s;
    s.n_sites = j.at("n_sites").get<int>();
    const auto f = j.at("frequencies_mhz").get<std::vector<double>>();
    const auto c = j.at("couplings_mhz").get<std::vector<double>>();
    s.frequencies.resize(static_cast<Eigen::Index>(f.size()));
    s.couplings.resize(static_cast<Eigen::Index>(c.size()));
    for (size_t i = 0; i < f.size(); ++i) s.frequencies(i) = mhz_to_angular(f[i]);
    for (size_t i = 0; i < c.size(); ++i) s.couplings(i) = mhz_to_angular(c[i]);
    s.meta.kind = parse_chain_kind(j.value("kind", std::string("custom")));
    s.meta.m = j.value("m", 0);
    s.meta.j = mhz_to_angular(j.value("j_mhz", 0.0));
    s.meta.theta = j.value("theta_rad", 0.0);
    validate(s);
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("chain JSON: ") + e.what());
  }
}

Json to_json(const HamiltonianMatrix& h) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) {
      rr.push_back(h.matrix(r, c).real());
      ri.push_back(h.matrix(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"basis", h.basis == Basis::Full ? "full" : "single_excitation"},
              {"n_sites", h.n_sites},
              {"units", "rad/ns"},
              {"labels", h.labels},
              {"re", re},
              {"im", im}};
}

Json density_json(const QuantumState& s) {
  const Eigen::MatrixXcd rho = s.density();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      rr.push_back(rho(r, c).real());
      ri.push_back(rho(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return Json{{"re", re}, {"im", im}};
}

Json to_json(const FidelityReport& r) {
  return Json{{"target", target_name(r.target)},
              {"value", r.value},
              {"phase_maximized_value", r.phase_maximized_value},
              {"subsystem", r.subsystem}};
}

Json to_json(const PstConditionReport& r) {
  return Json{{"mirror_ok", r.mirror_ok},
              {"mirror_residual", r.mirror_residual},
              {"spacing_ok", r.spacing_ok},
              {"gap_integers", r.gap_integers},
              {"gap_residuals", r.gap_residuals},
              {"tau_ns", r.tau}};
}

Json to_json(const CalibrationReport& r) {
  Json params = Json::array();
  for (const auto& p : r.parameters) {
    params.push_back(Json{{"element", p.element.kind == Element::Qubit ? "qubit" : "coupler"},
                          {"index", p.element.index + 1},
                          {"target_mhz", p.target},
                          {"zpa", p.zpa},
                          {"measured_mhz", number_or_null(p.measured)},
                          {"measured_residual_mhz", number_or_null(p.measured_residual)},
                          {"true_mhz", p.true_value},
                          {"true_residual_mhz", p.true_residual},
                          {"max_inner_iterations", p.max_inner_iterations},
                          {"experiments", p.experiments},
                          {"converged", p.converged}});
  }
  return Json{{"parameters", params},
              {"outer_cycles", r.outer_cycles},
              {"converged", r.converged},
              {"scheme", environment_scheme_name(r.scheme)},
              {"averaging", r.averaging},
              {"max_measured_residual_mhz", r.max_measured_residual()},
              {"max_true_residual_mhz", r.max_true_residual()},
              {"max_inner_iterations", r.max_inner_iterations()}};
}

Json to_json(const OptimizerTrace& t) {
  Json a = Json::array();
  for (size_t i = 0; i < t.evaluations.size(); ++i) {
    const auto& e = t.evaluations[i];
    a.push_back(Json{{"iteration", i + 1},
                     {"cost", e.cost},
                     {"best", e.best},
                     {"x", std::vector<double>(e.x.data(), e.x.data() + e.x.size())}});
  }
  return a;
}

Json to_json(const SampledPopulations& s) {
  return Json{{"times_ns", s.times}, {"p_first", s.p1}, {"p_last", s.pn}};
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os) {
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (!first_) os_ << ',';
  os_ << v;
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  first_ = true;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.states.empty()) throw Error(ErrorKind::Precondition, "empty trajectory");
  const int n = traj.states.front().n_sites();
  std::vector<std::string> header{"t_ns"};
  for (int k = 1; k <= n; ++k) header.push_back("P_site" + std::to_string(k));
  header.push_back("trace");
  header.push_back("purity");
  CsvWriter w(os, header);
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const QuantumState& s = traj.states[i];
    w.cell(traj.times[i]);
    const Eigen::VectorXd p = populations(s);
    for (int k = 0; k < n; ++k) w.cell(p(k));
    w.cell(s.trace()).cell(s.purity());
    w.end_row();
  }
}

void write_curve_csv(std::ostream& os, const DegradationCurve& curve) {
  CsvWriter w(os, {"sigma_mhz", "mean_ratio", "std", "n_samples", "sem"});
  for (size_t i = 0; i < curve.sigma_grid.size(); ++i) {
    w.cell(curve.sigma_grid[i]).cell(curve.mean_ratio[i]).cell(curve.std[i]);
    w.cell(curve.n_samples).cell(curve.sem[i]);
    w.end_row();
  }
}

}  // namespace zigzag
