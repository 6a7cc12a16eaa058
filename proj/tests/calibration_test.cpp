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

#include <cmath>
#include <set>

#include "zigzag/calibration.hpp"
#include "zigzag/device.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/protocols.hpp"
#include "zigzag/units.hpp"

using namespace zigzag;

namespace {

DeviceConfig linear_device() {
  DeviceConfig c;
  c.crosstalk = 0.0;
  c.noise_mhz = 0.0;
  c.variation = 0.0;
  c.qubit_offset_spread = 0.0;
  c.coupler_offset_spread = 0.0;
  c.qubit_map = ControlMap{10.0, 50.0, 0.0, 0.0, 1.0};
  c.coupler_map = ControlMap{5.0, 10.0, 0.0, 0.0, 1.0};
  return c;
}

ChainSpec fst_targets() {
  FstSetup s;
  s.n_sites = 5;
  s.m = 4;
  s.f_j_mhz = 9.0;
  return fst_chain(s);
}

bool same_report(const CalibrationReport& a, const CalibrationReport& b) {
  if (a.parameters.size() != b.parameters.size()) return false;
  for (size_t i = 0; i < a.parameters.size(); ++i) {
    const ParameterReport &p = a.parameters[i], &q = b.parameters[i];
    if (p.zpa != q.zpa || p.measured != q.measured || p.experiments != q.experiments) return false;
  }
  return a.qubit_zpas == b.qubit_zpas && a.coupler_zpas == b.coupler_zpas &&
         a.outer_cycles == b.outer_cycles;
}

}  // namespace

TEST(ControlMap, InverseRoundTrip) {
  const ControlMap m{0.0, 120.0, 30.0, 2.0, 3.0};
  for (double z = -0.9; z <= 0.9; z += 0.15) {
    EXPECT_NEAR(m.inverse(m.value(z), -1.0, 1.0), z, 1e-10);
    const double h = 1e-6;
    EXPECT_NEAR(m.slope(z), (m.value(z + h) - m.value(z - h)) / (2 * h), 1e-5);
  }
  EXPECT_DOUBLE_EQ(m.inverse(1e6, -1.0, 1.0), 1.0);
}

TEST(Fits, RecoverExactFrequencies) {
  for (double j : {0.7, 3.0, 10.0, 47.3}) {
    Eigen::VectorXd p(256);
    for (int k = 0; k < 256; ++k) p(k) = std::pow(std::sin(2.0 * kPi * j * 1e-3 * k), 2);
    EXPECT_NEAR(fit_swap_frequency(p, 1.0), j, 1e-6);
  }
  for (double f : {-120.0, -3.3, 0.8, 75.0}) {
    Eigen::VectorXcd s(256);
    for (int k = 0; k < 256; ++k) s(k) = std::polar(1.0, -2.0 * kPi * f * 1e-3 * k);
    EXPECT_NEAR(fit_precession_frequency(s, 1.0), f, 1e-6);
  }
}

TEST(Experiments, LinearMapsNoNoise) {
  DeviceModel d(linear_device());
  for (double z : {-0.4, 0.0, 0.3, 0.8}) {
    EXPECT_NEAR(swap_experiment(d, 1, z), 5.0 + 10.0 * z, 1e-6);
    EXPECT_NEAR(ramsey_experiment(d, 2, z), 10.0 + 50.0 * z, 1e-6);
  }
  EXPECT_DOUBLE_EQ(d.zpa({Element::Coupler, 1}), 0.8);
}

TEST(Experiments, TenMegahertzSwap) {
  DeviceConfig c = linear_device();
  c.coupler_map.f0 = 10.0;
  DeviceModel d(c);
  EXPECT_NEAR(swap_experiment(d, 0, 0.0), 10.0, 0.01);
}

TEST(Experiments, NoiseIsDeterministicPerCall) {
  DeviceModel a{DeviceConfig{}}, b{DeviceConfig{}};
  const double a1 = swap_experiment(a, 2, 0.1), b1 = swap_experiment(b, 2, 0.1);
  EXPECT_EQ(a1, b1);
  EXPECT_EQ(ramsey_experiment(a, 0, -0.2), ramsey_experiment(b, 0, -0.2));
  EXPECT_NE(swap_experiment(a, 2, 0.1), a1);  // next call, next draw
  EXPECT_EQ(a.calls({Element::Coupler, 2}), 2u);
  EXPECT_NEAR(a1, a.true_value({Element::Coupler, 2}), 0.2);
}

TEST(Experiments, RangeChecks) {
  DeviceModel d{DeviceConfig{}};
  for (auto f : {+[](DeviceModel& m) { swap_experiment(m, 4, 0.0); },
                 +[](DeviceModel& m) { ramsey_experiment(m, 5, 0.0); },
                 +[](DeviceModel& m) { swap_experiment(m, 0, 1.5); }}) {
    try {
      f(d);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
  }
}

TEST(Device, CrosstalkIsLinearAndLocal) {
  DeviceConfig c = linear_device();
  c.crosstalk = 0.03;
  DeviceModel d(c);
  const double before = d.true_value({Element::Qubit, 0});
  d.set_zpa({Element::Coupler, 0}, 0.5);
  EXPECT_NEAR(d.true_value({Element::Qubit, 0}) - before, 50.0 * 0.03 * 0.5, 1e-12);
  const double far = d.true_value({Element::Qubit, 3});
  d.set_zpa({Element::Coupler, 0}, -0.5);
  EXPECT_EQ(d.true_value({Element::Qubit, 3}), far);
}

TEST(Device, SolveZpasRealizesTargets) {
  const DeviceModel d{DeviceConfig{}};
  const ChainSpec t = fst_targets();
  Eigen::VectorXd f(5), j(4);
  for (int k = 0; k < 5; ++k) f(k) = angular_to_mhz(t.frequencies(k));
  for (int k = 0; k < 4; ++k) j(k) = angular_to_mhz(t.couplings(k));
  Eigen::VectorXd zq, zc, f2, j2;
  d.solve_zpas(f, j, zq, zc);
  d.parameters_at(zq, zc, f2, j2);
  EXPECT_LT((f2 - f).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((j2 - j).cwiseAbs().maxCoeff(), 1e-9);
  Eigen::VectorXd too_far = f;
  too_far(2) = 1000.0;
  EXPECT_THROW(d.solve_zpas(too_far, j, zq, zc), Error);
}

TEST(Secant, ExactOnAffineMaps) {
  auto v = [](double z) { return 7.0 - 3.0 * z; };
  const double z = secant_step(0.1, v(0.1), 0.4, v(0.4), 2.5);
  EXPECT_NEAR(v(z), 2.5, 1e-12);
}

TEST(Secant, DegenerateValuesThrow) {
  try {
    secant_step(0.0, 5.0, 0.1, 5.0, 6.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSecant);
  }
}

TEST(Secant, QuadraticConvergesWithinFiveSteps) {
  auto v = [](double z) { return 20.0 + 30.0 * z + 15.0 * z * z; };
  for (double target : {5.0, 32.0, 50.0, 60.0}) {
    double z0 = 0.0, z1 = 0.05;
    int steps = 0;
    while (std::abs(v(z1) - target) >= 0.1 && steps < 5) {
      const double z2 = secant_step(z0, v(z0), z1, v(z1), target);
      z0 = z1;
      z1 = z2;
      ++steps;
    }
    EXPECT_LT(std::abs(v(z1) - target), 0.1) << target;
  }
}

TEST(Rounds, SeparationAndCoverage) {
  std::vector<Element> qubits;
  for (int q = 0; q < 7; ++q) qubits.push_back({Element::Qubit, q});
  const auto rounds = calibration_rounds(qubits, 3.0);
  ASSERT_EQ(rounds.size(), 4u);
  EXPECT_EQ(rounds[0].size(), 2u);
  EXPECT_EQ(rounds[0][1].index, 4);
  std::set<int> seen;
  for (const auto& r : rounds) {
    for (size_t a = 0; a < r.size(); ++a) {
      seen.insert(r[a].index);
      for (size_t b = a + 1; b < r.size(); ++b) {
        EXPECT_GT(std::abs(r[a].position() - r[b].position()), 3.0);
      }
    }
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(CalibrationConfig, Validation) {
  CalibrationConfig c;
  EXPECT_NO_THROW(c.validate());
  c.coupling_threshold = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = CalibrationConfig{};
  c.max_inner_iterations = 0;
  EXPECT_THROW(c.validate(), Error);
  c = CalibrationConfig{};
  c.parallel_distance = 0.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Schemes, NamesRoundTrip) {
  for (EnvironmentScheme s : {EnvironmentScheme::StaggeredAverage, EnvironmentScheme::ExtremeDetuned}) {
    EXPECT_EQ(parse_environment_scheme(environment_scheme_name(s)), s);
  }
  EXPECT_THROW(parse_environment_scheme("random"), Error);
}

TEST(CalibrateAll, IdealDeviceConvergesInOneCycle) {
  DeviceConfig c;
  c.crosstalk = 0.0;
  c.noise_mhz = 0.0;
  DeviceModel d(c);
  const CalibrationReport r = calibrate_all(d, fst_targets());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.outer_cycles, 1);
  EXPECT_EQ(r.parameters.size(), 9u);
  EXPECT_LT(r.max_measured_residual(), 0.1);
  EXPECT_LT(r.max_true_residual(), 0.1);
  EXPECT_LE(r.max_inner_iterations(), 5);
  EXPECT_EQ(r.parameters.front().element.kind, Element::Coupler);
  EXPECT_EQ(r.parameters.back().element.kind, Element::Qubit);
  EXPECT_EQ(d.qubit_zpas(), r.qubit_zpas);
}

TEST(CalibrateAll, DefaultDeviceBothSchemes) {
  for (EnvironmentScheme s : {EnvironmentScheme::StaggeredAverage, EnvironmentScheme::ExtremeDetuned}) {
    DeviceModel d{DeviceConfig{}};
    CalibrationConfig cfg;
    cfg.scheme = s;
    const CalibrationReport r = calibrate_all(d, fst_targets(), cfg);
    EXPECT_TRUE(r.converged) << environment_scheme_name(s);
    EXPECT_LE(r.outer_cycles, 2);
    EXPECT_LT(r.max_measured_residual(), 0.1);
    EXPECT_LE(r.max_inner_iterations(), 5);
    EXPECT_FALSE(r.averaging.empty());
  }
}

TEST(CalibrateAll, ReproducibleAndParallelSafe) {
  CalibrationConfig seq;
  seq.parallel = false;
  CalibrationConfig par;
  par.parallel = true;
  par.threads = 3;
  DeviceModel a{DeviceConfig{}}, b{DeviceConfig{}}, c{DeviceConfig{}};
  const CalibrationReport ra = calibrate_all(a, fst_targets(), seq);
  const CalibrationReport rb = calibrate_all(b, fst_targets(), par);
  const CalibrationReport rc = calibrate_all(c, fst_targets(), seq);
  EXPECT_TRUE(same_report(ra, rb));
  EXPECT_TRUE(same_report(ra, rc));
}

TEST(CalibrateAll, SizeMismatchThrows) {
  DeviceModel d{DeviceConfig{}};
  try {
    calibrate_all(d, build_line(4, 0.05));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSize);
  }
}
