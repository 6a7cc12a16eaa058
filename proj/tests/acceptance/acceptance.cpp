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

// Acceptance runner: executes the shipped configs in-process and prints one
// PASS/FAIL line per criterion. Exit status is 0 only if every line passes.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zigzag/runner.hpp"

namespace fs = std::filesystem;
using zigzag::Json;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const Json& find_m(const Json& results, int m) {
  for (const Json& r : results) {
    if (r.at("m").get<int>() == m) return r;
  }
  throw std::runtime_error("m = " + std::to_string(m) + " missing from results");
}

Verdict criterion_1(const Json& s) {
  Verdict v;
  v.check(s.at("entries").size() == 44, "44 (N, m) pairs evaluated");
  const double e = s.at("max_eigen_rel_error").get<double>();
  v.check(e <= 1e-8, "max relative eigenvalue error " + fmt(e) + " <= 1e-8");
  return v;
}

Verdict criterion_2(const Json& s) {
  Verdict v;
  const double e = s.at("max_param_abs_error").get<double>();
  v.check(e <= 1e-7, "max reconstructed parameter error " + fmt(e) + " J <= 1e-7");
  return v;
}

Verdict criterion_3(const Json& s) {
  Verdict v;
  bool line = false, zig = false;
  for (const Json& r : s.at("results")) {
    line = line || r.at("configuration") == "line";
    zig = zig || r.at("configuration") == "zigzag";
  }
  v.check(line && zig, "line and zig-zag chains covered");
  const double p = s.at("min_p_transfer").get<double>();
  v.check(p >= 1.0 - 1e-9, "min |<N|U(tau)|1>|^2 = " + fmt(p) + " >= 1 - 1e-9");
  return v;
}

Verdict criterion_4(const Json& s) {
  Verdict v;
  v.check(s.at("n").get<int>() == 5 && s.at("ideal").get<bool>(), "N = 5, dissipation-free");
  for (const Json& r : s.at("results")) {
    const std::string m = "m = " + std::to_string(r.at("m").get<int>());
    const double p1 = r.at("populations").front().get<double>();
    const double pn = r.at("populations").back().get<double>();
    const double bell = r.at("bell_fidelity").at("value").get<double>();
    const double rev = r.at("revival_deviation").get<double>();
    v.check(std::abs(p1 - 0.5) <= 1e-6 && std::abs(pn - 0.5) <= 1e-6,
            m + ": end populations " + fmt(p1) + ", " + fmt(pn) + " within 0.5 +/- 1e-6");
    v.check(bell >= 0.999, m + ": Bell fidelity " + fmt(bell) + " >= 0.999");
    v.check(rev <= 1e-4, m + ": revival deviation at 2 tau " + fmt(rev) + " <= 1e-4");
  }
  return v;
}

Verdict criterion_5(const Json& s) {
  Verdict v;
  const double fj = s.at("f_j_mhz").get<double>();
  const double expected[] = {5.9, 10.2, 13.2, 15.6};
  for (int m = 0; m <= 3; ++m) {
    bool found = false;
    std::string where = "none";
    for (const Json& spot : s.at("spots")) {
      const double d = spot.at("delta_mhz").get<double>();
      const double c = spot.at("coupling_mhz").get<double>();
      if (std::abs(c - expected[m]) <= 0.1 && std::abs(d - 2.0 * m * fj) <= 0.2) {
        found = true;
        where = "(" + fmt(d) + ", " + fmt(c) + ")";
      }
    }
    v.check(found, "m = " + std::to_string(m) + ": spot near (" + fmt(2.0 * m * fj) + ", " +
                       fmt(expected[m]) + ") MHz found at " + where);
  }
  return v;
}

Verdict criterion_6(const Json& s) {
  Verdict v;
  v.check(s.at("n_triples").get<int>() == 1000, "1000 random triples");
  const double d = s.at("max_abs_diff").get<double>();
  v.check(d <= 1e-10, "max population difference " + fmt(d) + " <= 1e-10");
  return v;
}

Verdict criterion_7(const Json& s) {
  Verdict v;
  const std::map<int, double> paper{{0, 0.910}, {4, 0.914}, {50, 0.926}};
  for (const auto& [m, want] : paper) {
    const double f = find_m(s.at("results"), m).at("bell_fidelity").at("value").get<double>();
    v.check(std::abs(f - want) <= 0.010,
            "m = " + std::to_string(m) + ": F = " + fmt(f) + " vs " + fmt(want) + " +/- 0.010");
  }
  const Json& res = s.at("results");
  const double f0 = res.front().at("bell_fidelity").at("value").get<double>();
  bool dip = false;
  for (const Json& r : res) dip = dip || r.at("bell_fidelity").at("value").get<double>() < f0;
  v.check(dip, "curve dips below F(m = 0)");
  const Json& x = s.at("tradeoff_crossing_m");
  const double cross = x.is_null() ? NAN : x.get<double>();
  v.check(std::abs(cross - 3.0) <= 1.0, "trade-off crossing m = " + fmt(cross) + " within 3 +/- 1");
  return v;
}

Verdict criterion_8(const Json& s) {
  Verdict v;
  const Json& x = s.at("tradeoff_crossing_m");
  const double cross = x.is_null() ? NAN : x.get<double>();
  v.check(std::abs(cross - 6.0) <= 2.0, "trade-off crossing m = " + fmt(cross) + " within 6 +/- 2");
  const Json& spread = s.at("saturation_spread");
  const double sp = spread.is_null() ? NAN : spread.get<double>();
  v.check(sp <= 0.01, "W fidelity spread over m >= 50 is " + fmt(sp) + " <= 0.01");
  const double p0 = find_m(s.at("results"), 0).at("peak_even_population").get<double>();
  const double p10 = find_m(s.at("results"), 10).at("peak_even_population").get<double>();
  const double p50 = find_m(s.at("results"), 50).at("peak_even_population").get<double>();
  v.check(p0 > p10 && p10 > p50, "even-site peaks " + fmt(p0) + " > " + fmt(p10) + " > " + fmt(p50));
  return v;
}

struct CurvePoint {
  double mean, sem;
};

CurvePoint at_sigma(const Json& r, double sigma) {
  const auto& grid = r.at("sigma_mhz");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].get<double>() == sigma) {
      return {r.at("mean_ratio")[i].get<double>(), r.at("sem")[i].get<double>()};
    }
  }
  throw std::runtime_error("sigma " + fmt(sigma) + " missing");
}

Verdict criterion_9(const Json& even, const Json& odd) {
  Verdict v;
  v.check(even.at("target") == "omega_even" && odd.at("target") == "omega_odd", "noise targets");
  for (const Json* s : {&even, &odd}) {
    for (const Json& r : s->at("results")) {
      v.check(r.at("n_samples").get<int>() == 100, "n_samples = 100");
    }
  }
  const CurvePoint e0 = at_sigma(find_m(even.at("results"), 0), 30.0);
  const CurvePoint e4 = at_sigma(find_m(even.at("results"), 4), 30.0);
  const CurvePoint e6 = at_sigma(find_m(even.at("results"), 6), 30.0);
  v.check(e6.mean - e6.sem > e4.mean + e4.sem,
          "even, 30 MHz: m=6 " + fmt(e6.mean) + "+/-" + fmt(e6.sem) + " above m=4 " + fmt(e4.mean) +
              "+/-" + fmt(e4.sem));
  v.check(e4.mean - e4.sem > e0.mean + e0.sem,
          "even, 30 MHz: m=4 above m=0 " + fmt(e0.mean) + "+/-" + fmt(e0.sem));
  const Json& r50 = find_m(even.at("results"), 50);
  double lowest = 1.0;
  for (const Json& x : r50.at("mean_ratio")) lowest = std::min(lowest, x.get<double>());
  v.check(lowest >= 0.99, "even, m=50: min F/F0 = " + fmt(lowest) + " >= 0.99");
  for (const Json& sig : odd.at("results").front().at("sigma_mhz")) {
    const double sigma = sig.get<double>();
    std::vector<CurvePoint> pts;
    for (int m : {0, 4, 6}) pts.push_back(at_sigma(find_m(odd.at("results"), m), sigma));
    bool overlap = true;
    for (size_t a = 0; a < pts.size(); ++a) {
      for (size_t b = a + 1; b < pts.size(); ++b) {
        overlap = overlap && std::abs(pts[a].mean - pts[b].mean) <= pts[a].sem + pts[b].sem;
      }
    }
    v.check(overlap, "odd, " + fmt(sigma) + " MHz: m=0,4,6 at " + fmt(pts[0].mean) + ", " +
                         fmt(pts[1].mean) + ", " + fmt(pts[2].mean) + " overlap within error bars");
  }
  return v;
}

Verdict criterion_10(const Json& s) {
  Verdict v;
  for (const Json& r : s.at("results")) {
    const std::string scheme = r.at("scheme").get<std::string>();
    const double meas = r.at("max_measured_residual_mhz").get<double>();
    const int inner = r.at("max_inner_iterations").get<int>();
    const int outer = r.at("outer_cycles").get<int>();
    v.check(r.at("converged").get<bool>(), scheme + ": converged");
    v.check(meas < 0.1, scheme + ": max measured residual " + fmt(meas) + " MHz < 0.1");
    v.check(inner <= 5, scheme + ": max inner iterations " + std::to_string(inner) + " <= 5");
    v.check(outer <= 2, scheme + ": outer cycles " + std::to_string(outer) + " <= 2");
    v.info(scheme + ": max hidden true residual " + fmt(r.at("max_true_residual_mhz").get<double>()) +
           " MHz");
  }
  return v;
}

Verdict criterion_11(const Json& s) {
  Verdict v;
  v.check(s.at("start") == "perturbed" && s.at("perturbation_mhz").get<double>() == 2.0,
          "start perturbed by +/- 2 MHz");
  for (const Json& r : s.at("results")) {
    const std::string method = r.at("method").get<std::string>();
    const int bound = method == "nelder_mead" ? 150 : 300;
    const int stab = r.at("stabilization_iteration").get<int>();
    const double cost = r.at("final_cost").get<double>();
    const double dev = r.at("max_population_deviation").get<double>();
    v.check(r.at("best_non_increasing").get<bool>(), method + ": best-so-far non-increasing");
    v.check(stab <= bound, method + ": stabilizes at iteration " + std::to_string(stab) + " <= " +
                               std::to_string(bound));
    v.check(cost < 0.05, method + ": final cost " + fmt(cost) + " < 0.05");
    v.check(dev <= 0.05, method + ": max |P - 0.5| = " + fmt(dev) + " <= 0.05");
  }
  return v;
}

std::map<std::string, std::string> csv_bodies(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    out[e.path().filename().string()] = buf.str();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path configs = "configs/acceptance", work = "acceptance_runs";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--configs") configs = argv[i + 1];
    else if (flag == "--work") work = argv[i + 1];
  }
  fs::remove_all(work);

  const std::vector<std::string> names = {
      "c01_c02_spectrum_check", "c03_pst_ideal",        "c04_fst_ideal",
      "c05_solution_space",     "c06_three_site_oracle", "c07_fst_lindblad",
      "c08_lattice_lindblad",   "c09_noise_omega_even", "c09_noise_omega_odd",
      "c10_calibrate",          "c11_optimize"};
  std::map<std::string, zigzag::RunResult> first, second;
  std::map<std::string, std::string> errors;
  for (const auto& pass : {std::make_pair(&first, "first"), std::make_pair(&second, "second")}) {
    for (const auto& name : names) {
      zigzag::RunOptions opts;
      opts.out = work / pass.second;
      opts.threads = 2;
      try {
        (*pass.first)[name] = zigzag::run_config_file(configs / (name + ".json"), opts);
      } catch (const std::exception& e) {
        errors[name] = e.what();
      }
    }
  }

  auto summary = [&](const std::string& name) -> const Json& {
    if (errors.count(name)) throw std::runtime_error(name + " failed: " + errors[name]);
    return first.at(name).summary;
  };

  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"spectrum identity", [&] { return criterion_1(summary("c01_c02_spectrum_check")); }},
      {"IEP round trip", [&] { return criterion_2(summary("c01_c02_spectrum_check")); }},
      {"ideal PST", [&] { return criterion_3(summary("c03_pst_ideal")); }},
      {"ideal FST", [&] { return criterion_4(summary("c04_fst_ideal")); }},
      {"bright-spot positions", [&] { return criterion_5(summary("c05_solution_space")); }},
      {"three-site analytic oracle", [&] { return criterion_6(summary("c06_three_site_oracle")); }},
      {"Lindblad fidelity vs m, 1D", [&] { return criterion_7(summary("c07_fst_lindblad")); }},
      {"Lindblad fidelity vs m, 2D", [&] { return criterion_8(summary("c08_lattice_lindblad")); }},
      {"noise robustness ordering",
       [&] { return criterion_9(summary("c09_noise_omega_even"), summary("c09_noise_omega_odd")); }},
      {"calibration convergence", [&] { return criterion_10(summary("c10_calibrate")); }},
      {"optimization", [&] { return criterion_11(summary("c11_optimize")); }},
      {"determinism", [&] {
         Verdict v;
         for (const auto& name : names) {
           if (errors.count(name)) {
             v.check(false, name + ": run failed");
             continue;
           }
           const auto a = csv_bodies(first.at(name).directory);
           const auto b = csv_bodies(second.at(name).directory);
           v.check(!a.empty() && a == b,
                   name + ": " + std::to_string(a.size()) + " CSV files byte-identical on rerun");
         }
         return v;
       }},
  };

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.check(false, e.what());
    }
    failed += v.pass ? 0 : 1;
    std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << ": "
              << criteria[i].first << '\n';
    for (const auto& n : v.notes) std::cout << "    " << n << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
