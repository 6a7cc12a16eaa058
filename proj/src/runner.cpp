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

#include "zigzag/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "zigzag/calibration.hpp"
#include "zigzag/device.hpp"
#include "zigzag/dynamics.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/feedback.hpp"
#include "zigzag/metrics.hpp"
#include "zigzag/noise.hpp"
#include "zigzag/optimizers.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/protocols.hpp"
#include "zigzag/spectral.hpp"

namespace zigzag {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorKind::Schema, message);
}

// ---------------------------------------------------------------------------
// Typed access to a JSON object with unknown-key rejection.

template <class T>
T convert(const Json& v, const std::string& path);

template <>
double convert<double>(const Json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path + ": expected a number");
  return v.get<double>();
}

template <>
int convert<int>(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_error(path + ": expected an integer");
  const long long x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    schema_error(path + ": integer out of range");
  }
  return static_cast<int>(x);
}

template <>
std::uint64_t convert<std::uint64_t>(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  schema_error(path + ": expected a non-negative integer");
}

template <>
bool convert<bool>(const Json& v, const std::string& path) {
  if (!v.is_boolean()) schema_error(path + ": expected true or false");
  return v.get<bool>();
}

template <>
std::string convert<std::string>(const Json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path + ": expected a string");
  return v.get<std::string>();
}

template <class T>
std::vector<T> convert_list(const Json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path + ": expected an array");
  std::vector<T> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(convert<T>(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

class Fields {
 public:
  Fields(const Json& object, std::string where) : j_(object), where_(std::move(where)) {
    if (!j_.is_object()) schema_error(where_ + ": expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    return has(key) ? convert<T>(j_.at(key), path(key)) : fallback;
  }

  template <class T>
  T require(const std::string& key) {
    if (!has(key)) schema_error(path(key) + ": required");
    return convert<T>(j_.at(key), path(key));
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return convert<T>(j_.at(key), path(key));
  }

  template <class T>
  std::vector<T> list(const std::string& key, std::vector<T> fallback) {
    if (!has(key)) return fallback;
    std::vector<T> out = convert_list<T>(j_.at(key), path(key));
    if (out.empty()) schema_error(path(key) + ": must not be empty");
    return out;
  }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  /// Nested object; an absent key yields an empty object.
  Fields object(const std::string& key) {
    static const Json empty = Json::object();
    return Fields(has(key) ? j_.at(key) : empty, path(key));
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) schema_error(path(item.key()) + ": unknown key");
    }
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

void require_that(bool ok, const std::string& message) {
  if (!ok) schema_error(message);
}

// ---------------------------------------------------------------------------
// Shared config blocks.

PulseTiming parse_pulse(Fields& f) {
  Fields p = f.object("pulse");
  PulseTiming t;
  t.qubit_sigma = p.get("qubit_sigma_ns", t.qubit_sigma);
  t.coupler_sigma = p.get("coupler_sigma_ns", t.coupler_sigma);
  t.buffer = p.get("buffer_ns", t.buffer);
  t.dt = p.get("dt_ns", t.dt);
  if (auto a = p.optional<std::string>("qubit_alignment")) t.qubit_alignment = parse_alignment(a->c_str());
  if (auto a = p.optional<std::string>("coupler_alignment")) {
    t.coupler_alignment = parse_alignment(a->c_str());
  }
  p.finish();
  require_that(t.qubit_sigma > 0 && t.coupler_sigma > 0, "pulse sigmas must be positive");
  require_that(t.buffer >= 0, "pulse buffer must be non-negative");
  require_that(t.dt > 0 && t.dt <= std::min(t.qubit_sigma, t.coupler_sigma) / 5.0,
               "pulse dt_ns must be positive and at most sigma / 5");
  return t;
}

struct Channels {
  std::optional<double> t1_us, t2_us, tphi_us;

  NoiseChannelSet build(int n) const {
    const double t1 = t1_us.value_or(kInf);
    if (tphi_us) return NoiseChannelSet::from_tphi(n, t1, *tphi_us);
    if (t2_us) return NoiseChannelSet::uniform(n, t1, *t2_us);
    return NoiseChannelSet::uniform(n, t1, kInf);
  }

  Json to_json() const {
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    return Json{{"t1_us", opt(t1_us)}, {"t2_us", opt(t2_us)}, {"tphi_us", opt(tphi_us)}};
  }
};

Channels parse_channels(Fields& f) {
  Channels c;
  c.t1_us = f.optional<double>("t1_us");
  c.t2_us = f.optional<double>("t2_us");
  c.tphi_us = f.optional<double>("tphi_us");
  require_that(!(c.t2_us && c.tphi_us), "give at most one of t2_us and tphi_us");
  for (const auto* v : {&c.t1_us, &c.t2_us, &c.tphi_us}) {
    require_that(!*v || **v > 0, "coherence times must be positive");
  }
  if (c.t1_us && c.t2_us) require_that(*c.t2_us <= 2.0 * *c.t1_us, "unphysical channels: T2 > 2 T1");
  return c;
}

FstSetup parse_fst(Fields& f) {
  FstSetup s;
  s.n_sites = f.get("n", 5);
  s.f_j_mhz = f.get("f_j_mhz", 9.0);
  s.theta = f.get("theta_rad", kPi / 8.0);
  s.timing = parse_pulse(f);
  s.plateau_ns = f.optional<double>("plateau_ns");
  s.ideal = f.get("ideal", false);
  require_that(s.n_sites >= 2, "n must be at least 2");
  require_that(s.f_j_mhz > 0, "f_j_mhz must be positive");
  return s;
}

std::vector<int> parse_m_values(Fields& f, std::vector<int> fallback) {
  std::vector<int> ms = f.list<int>("m_values", std::move(fallback));
  for (int m : ms) require_that(m >= 0, "m values must be non-negative");
  return ms;
}

DeviceConfig parse_device(Fields& f, int n_qubits) {
  Fields d = f.object("device");
  DeviceConfig c;
  c.n_qubits = n_qubits;
  c.crosstalk = d.get("crosstalk", c.crosstalk);
  c.noise_mhz = d.get("noise_mhz", c.noise_mhz);
  c.variation = d.get("variation", c.variation);
  c.z_min = d.get("z_min", c.z_min);
  c.z_max = d.get("z_max", c.z_max);
  c.seed = d.get<std::uint64_t>("seed", c.seed);
  d.finish();
  require_that(c.z_min < c.z_max, "device z range is empty");
  require_that(c.noise_mhz >= 0 && c.variation >= 0 && c.crosstalk >= 0,
               "device noise settings must be non-negative");
  return c;
}

Json device_json(const DeviceConfig& c) {
  return Json{{"n_qubits", c.n_qubits}, {"crosstalk", c.crosstalk}, {"noise_mhz", c.noise_mhz},
              {"variation", c.variation}, {"z_min", c.z_min},      {"z_max", c.z_max},
              {"seed", c.seed}};
}

Json pulse_json(const PulseTiming& t) {
  return Json{{"qubit_sigma_ns", t.qubit_sigma},
              {"coupler_sigma_ns", t.coupler_sigma},
              {"buffer_ns", t.buffer},
              {"dt_ns", t.dt},
              {"qubit_alignment", alignment_name(t.qubit_alignment)},
              {"coupler_alignment", alignment_name(t.coupler_alignment)}};
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

// ---------------------------------------------------------------------------
// Output context.

struct Context {
  fs::path dir;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> files;

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw Error(ErrorKind::Io, "cannot open " + (dir / name).string());
    body(os);
    os.flush();
    if (!os) throw Error(ErrorKind::Io, "write failed: " + (dir / name).string());
    files.push_back(name);
  }

  void write_json(const std::string& name, const Json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }
};

using Job = std::function<Json(Context&)>;
using Parser = std::function<Job(Fields&)>;

// ---------------------------------------------------------------------------
// build

Job parse_build(Fields& f) {
  const std::string configuration = f.get<std::string>("configuration", "zigzag");
  const int n = f.get("n", 5);
  const int m = f.get("m", 0);
  const int rows = f.get("rows", 3);
  const int cols = f.get("cols", 3);
  const double fj = f.get("f_j_mhz", 9.0);
  const std::optional<double> theta = f.optional<double>("theta_rad");
  const std::string basis_name = f.get<std::string>("basis", "single_excitation");
  require_that(basis_name == "single_excitation" || basis_name == "full",
               "basis must be single_excitation or full");
  require_that(configuration == "line" || configuration == "zigzag" ||
                   configuration == "effective" || configuration == "lattice",
               "configuration must be line, zigzag, effective or lattice");
  require_that(fj > 0, "f_j_mhz must be positive");
  const Basis basis = basis_name == "full" ? Basis::Full : Basis::SingleExcitation;
  return [=](Context& ctx) {
    const double j = mhz_to_angular(fj);
    Json spec_json;
    HamiltonianMatrix h;
    Eigen::VectorXd eig;
    Json summary{{"configuration", configuration}};
    if (configuration == "lattice") {
      const LatticeSpec spec = build_lattice(rows, cols, m, j, theta);
      spec_json = to_json(spec);
      h = realize(spec, basis);
      const HamiltonianMatrix se = realize(spec, Basis::SingleExcitation);
      const int ns = rows * cols;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(se.matrix.bottomRightCorner(ns, ns),
                                                         Eigen::EigenvaluesOnly);
      eig = es.eigenvalues();
    } else {
      ChainSpec spec = configuration == "line"      ? build_line(n, j)
                       : configuration == "zigzag" ? build_zigzag(n, m, j)
                                                   : build_effective_limit(n, j);
      if (theta) spec = apply_fst_deformation(spec, *theta);
      spec_json = to_json(spec);
      h = realize(spec, basis);
      eig = chain_eigenvalues(spec);
      summary["mirror_residual_mhz"] = angular_to_mhz(mirror_residual(spec));
      summary["pst_conditions"] = to_json(check_pst_conditions(spec, transfer_time(j)));
    }
    ctx.write_json("spec.json", spec_json);
    ctx.write_json("hamiltonian.json", to_json(h));
    ctx.write("eigenvalues.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"index", "eigenvalue_mhz", "eigenvalue_over_j"});
      for (Eigen::Index k = 0; k < eig.size(); ++k) {
        w.cell(static_cast<long long>(k + 1)).cell(angular_to_mhz(eig(k))).cell(eig(k) / j);
        w.end_row();
      }
    });
    summary["spec"] = spec_json;
    summary["eigenvalues_over_j"] = vector_json(eig / j);
    return summary;
  };
}

// ---------------------------------------------------------------------------
// spectrum-check

Job parse_spectrum_check(Fields& f) {
  const std::vector<int> ns = f.list<int>("n_values", {3, 5, 7, 9});
  const std::vector<int> ms = parse_m_values(f, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const double eig_tol = f.get("eigen_tolerance", kReconstructionTolerance);
  const double param_tol = f.get("parameter_tolerance", 1e-7);
  for (int n : ns) require_that(n >= 3 && n % 2 == 1, "n values must be odd and at least 3");
  return [=](Context& ctx) {
    Json entries = Json::array();
    double worst_eig = 0.0, worst_param = 0.0;
    bool all_ok = true;
    std::ostringstream csv;
    CsvWriter w(csv, {"n", "m", "eigen_rel_error", "param_abs_error", "mirror_ok", "spacing_ok",
                      "spectrum"});
    for (int n : ns) {
      for (int m : ms) {
        const TargetSpectrum target = target_spectrum(n, m);
        const ChainSpec built = build_zigzag(n, m, 1.0);
        const Eigen::VectorXd eig = chain_eigenvalues(built);
        const double scale = target.values.cwiseAbs().maxCoeff();
        const double eig_err = (eig - target.values).cwiseAbs().maxCoeff() / scale;
        const ChainSpec rec = reconstruct_tridiagonal(target, 1.0);
        const double param_err =
            std::max((rec.frequencies - built.frequencies).cwiseAbs().maxCoeff(),
                     (rec.couplings.cwiseAbs() - built.couplings.cwiseAbs()).cwiseAbs().maxCoeff());
        const PstConditionReport pst = check_pst_conditions(built, kPi);
        const bool ok = eig_err <= eig_tol && param_err <= param_tol && pst.mirror_ok && pst.spacing_ok;
        all_ok = all_ok && ok;
        worst_eig = std::max(worst_eig, eig_err);
        worst_param = std::max(worst_param, param_err);
        std::string spectrum;
        for (Eigen::Index k = 0; k < target.values.size(); ++k) {
          spectrum += (k ? " " : "") + format_number(target.values(k));
        }
        w.cell(n).cell(m).cell(eig_err).cell(param_err).cell(std::string(pst.mirror_ok ? "1" : "0"));
        w.cell(std::string(pst.spacing_ok ? "1" : "0")).cell(spectrum);
        w.end_row();
        entries.push_back(Json{{"n", n},
                               {"m", m},
                               {"spectrum", vector_json(target.values)},
                               {"eigen_rel_error", eig_err},
                               {"param_abs_error", param_err},
                               {"pst_conditions", to_json(pst)},
                               {"pass", ok}});
      }
    }
    ctx.write("spectrum_check.csv", [&](std::ostream& os) { os << csv.str(); });
    return Json{{"status", all_ok ? "PASS" : "FAIL"},
                {"max_eigen_rel_error", worst_eig},
                {"max_param_abs_error", worst_param},
                {"eigen_tolerance", eig_tol},
                {"parameter_tolerance", param_tol},
                {"entries", entries}};
  };
}

// ---------------------------------------------------------------------------
// pst-run

Job parse_pst_run(Fields& f) {
  const std::vector<int> ns = f.list<int>("n_values", {2, 3, 4, 5, 6, 7, 8, 9});
  const std::vector<int> ms = parse_m_values(f, {0, 1, 4, 10});
  const double fj = f.get("f_j_mhz", 9.0);
  const bool ideal = f.get("ideal", true);
  const bool process = f.get("process_fidelity", false);
  const PulseTiming timing = parse_pulse(f);
  const Channels channels = parse_channels(f);
  for (int n : ns) require_that(n >= 2, "n values must be at least 2");
  require_that(fj > 0, "f_j_mhz must be positive");
  return [=](Context& ctx) {
    struct Case {
      std::string configuration;
      int n, m;
    };
    std::vector<Case> cases;
    for (int n : ns) {
      cases.push_back({"line", n, 0});
      if (n % 2 == 1) {
        for (int m : ms) {
          if (m > 0) cases.push_back({"zigzag", n, m});
        }
      }
    }
    const double j = mhz_to_angular(fj);
    const double tau = transfer_time(j);
    struct Outcome {
      double transfer = 0.0, process = kNaN;
      PstConditionReport pst;
    };
    std::vector<Outcome> out(cases.size());
    parallel_for(cases.size(), ctx.threads, [&](std::size_t i) {
      const Case& c = cases[i];
      const ChainSpec spec = c.configuration == "line" ? build_line(c.n, j) : build_zigzag(c.n, c.m, j);
      out[i].pst = check_pst_conditions(spec, tau);
      const NoiseChannelSet ch = channels.build(c.n);
      const SiteGraph graph = site_graph(spec);
      Schedule schedule;
      if (ideal) {
        schedule = static_schedule(graph, tau, timing.dt);
        if (!ch.enabled()) {
          const QuantumState s =
              evolve_unitary(realize(spec), site_state(Basis::SingleExcitation, c.n, 1), tau);
          out[i].transfer = populations(s)(c.n - 1);
        }
      } else {
        PstSetup setup;
        setup.n_sites = c.n;
        setup.m = c.m;
        setup.f_j_mhz = fj;
        setup.timing = timing;
        schedule = pst_schedule(spec, setup);
      }
      if (!ideal || ch.enabled()) {
        const Trajectory tr = evolve_lindblad(schedule, graph, site_state(Basis::SingleExcitation, c.n, 1),
                                              ch, Basis::SingleExcitation);
        out[i].transfer = populations(tr.final_state())(c.n - 1);
      }
      if (process) out[i].process = pst_process_fidelity(spec, ch, schedule).fidelity;
    });
    Json results = Json::array();
    double worst = 1.0;
    ctx.write("transfer.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"configuration", "n", "m", "p_transfer", "infidelity", "process_fidelity",
                       "mirror_ok", "spacing_ok"});
      for (size_t i = 0; i < cases.size(); ++i) {
        const Outcome& o = out[i];
        w.cell(cases[i].configuration).cell(cases[i].n).cell(cases[i].m).cell(o.transfer);
        w.cell(1.0 - o.transfer).cell(o.process).cell(std::string(o.pst.mirror_ok ? "1" : "0"));
        w.cell(std::string(o.pst.spacing_ok ? "1" : "0"));
        w.end_row();
        worst = std::min(worst, o.transfer);
        results.push_back(Json{{"configuration", cases[i].configuration},
                               {"n", cases[i].n},
                               {"m", cases[i].m},
                               {"p_transfer", o.transfer},
                               {"process_fidelity", number(o.process)},
                               {"mirror_ok", o.pst.mirror_ok},
                               {"spacing_ok", o.pst.spacing_ok}});
      }
    });
    return Json{{"tau_ns", tau},
                {"ideal", ideal},
                {"channels", channels.to_json()},
                {"min_p_transfer", worst},
                {"results", results}};
  };
}

// ---------------------------------------------------------------------------
// fst-run

double revival_deviation(const ChainSpec& spec, double tau) {
  const HamiltonianMatrix h = realize(spec);
  const QuantumState psi0 = site_state(Basis::SingleExcitation, spec.n_sites, 1);
  double dev = 0.0;
  for (double t : {0.0, 0.25 * tau, 0.5 * tau, tau}) {
    const Eigen::VectorXd a = populations(evolve_unitary(h, psi0, t));
    const Eigen::VectorXd b = populations(evolve_unitary(h, psi0, t + 2.0 * tau));
    dev = std::max(dev, (a - b).cwiseAbs().maxCoeff());
  }
  return dev;
}

void write_trajectory(Context& ctx, const std::string& name, const Trajectory& tr) {
  ctx.write(name, [&](std::ostream& os) { write_trajectory_csv(os, tr); });
}

Job parse_fst_run(Fields& f) {
  const FstSetup base = parse_fst(f);
  const std::vector<int> ms = parse_m_values(f, {0, 4, 50});
  const Channels channels = parse_channels(f);
  const bool revival = f.get("revival", false);
  const double record = f.get("record_interval_ns", 0.5);
  require_that(record >= 0, "record_interval_ns must be non-negative");
  return [=](Context& ctx) {
    std::vector<FstRun> runs(ms.size());
    std::vector<double> revivals(ms.size(), kNaN);
    EvolutionOptions opts;
    opts.record_interval = record;
    parallel_for(ms.size(), ctx.threads, [&](std::size_t i) {
      FstSetup s = base;
      s.m = ms[i];
      runs[i] = run_fst(s, channels.build(s.n_sites), opts);
      if (revival) revivals[i] = revival_deviation(runs[i].spec, runs[i].tau);
    });
    Json results = Json::array();
    std::vector<double> bells;
    for (size_t i = 0; i < ms.size(); ++i) {
      const FstRun& r = runs[i];
      write_trajectory(ctx, "trajectory_m" + std::to_string(ms[i]) + ".csv", r.trajectory);
      bells.push_back(r.bell.value);
      results.push_back(Json{{"m", ms[i]},
                             {"bell_fidelity", to_json(r.bell)},
                             {"populations", vector_json(r.final_populations)},
                             {"peak_even_population", r.peak_even_population},
                             {"plateau_ns", r.plateau.plateau},
                             {"revival_deviation", number(revivals[i])},
                             {"spec", to_json(r.spec)}});
    }
    ctx.write("fidelity.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"m", "bell_fidelity", "phase_maximized", "p_first", "p_last", "peak_even",
                       "plateau_ns"});
      for (size_t i = 0; i < ms.size(); ++i) {
        const FstRun& r = runs[i];
        w.cell(ms[i]).cell(r.bell.value).cell(r.bell.phase_maximized_value);
        w.cell(r.final_populations(0)).cell(r.final_populations(base.n_sites - 1));
        w.cell(r.peak_even_population).cell(r.plateau.plateau);
        w.end_row();
      }
    });
    return Json{{"n", base.n_sites},
                {"f_j_mhz", base.f_j_mhz},
                {"theta_rad", base.theta},
                {"ideal", base.ideal},
                {"tau_ns", runs.front().tau},
                {"channels", channels.to_json()},
                {"pulse", pulse_json(base.timing)},
                {"tradeoff_crossing_m", number(tradeoff_crossing(ms, bells))},
                {"results", results}};
  };
}

// ---------------------------------------------------------------------------
// lattice-fst

Job parse_lattice_fst(Fields& f) {
  LatticeSetup base;
  base.rows = f.get("rows", 3);
  base.cols = f.get("cols", 3);
  base.f_j_mhz = f.get("f_j_mhz", 9.0);
  base.theta = f.get("theta_rad", kPi / 8.0);
  base.timing = parse_pulse(f);
  base.plateau_ns = f.optional<double>("plateau_ns");
  base.ideal = f.get("ideal", false);
  const std::vector<int> ms = parse_m_values(f, {0, 10, 50});
  const Channels channels = parse_channels(f);
  const int saturation_from = f.get("saturation_from_m", 50);
  const bool trajectories = f.get("write_trajectories", false);
  require_that(base.rows >= 2 && base.cols >= 2, "rows and cols must be at least 2");
  require_that(base.f_j_mhz > 0, "f_j_mhz must be positive");
  return [=](Context& ctx) {
    std::vector<LatticeRun> runs(ms.size());
    EvolutionOptions opts;
    opts.record_interval = trajectories ? 0.5 : 0.0;
    const int n = base.rows * base.cols;
    parallel_for(ms.size(), ctx.threads, [&](std::size_t i) {
      LatticeSetup s = base;
      s.m = ms[i];
      runs[i] = run_lattice(s, channels.build(n), opts);
    });
    Json results = Json::array();
    std::vector<double> fw;
    double sat_lo = kInf, sat_hi = -kInf;
    const std::vector<int> corners = corner_sites(base.rows, base.cols);
    for (size_t i = 0; i < ms.size(); ++i) {
      const LatticeRun& r = runs[i];
      if (trajectories) {
        write_trajectory(ctx, "trajectory_m" + std::to_string(ms[i]) + ".csv", r.trajectory);
      }
      fw.push_back(r.w.value);
      if (ms[i] >= saturation_from) {
        sat_lo = std::min(sat_lo, r.w.value);
        sat_hi = std::max(sat_hi, r.w.value);
      }
      results.push_back(Json{{"m", ms[i]},
                             {"w_fidelity", to_json(r.w)},
                             {"populations", vector_json(r.final_populations)},
                             {"peak_even_population", r.peak_even_population},
                             {"plateau_ns", r.plateau.plateau}});
    }
    ctx.write("fidelity.csv", [&](std::ostream& os) {
      std::vector<std::string> header{"m", "w_fidelity", "phase_maximized"};
      for (int c : corners) header.push_back("p_site" + std::to_string(c));
      header.push_back("peak_even");
      header.push_back("plateau_ns");
      CsvWriter w(os, header);
      for (size_t i = 0; i < ms.size(); ++i) {
        const LatticeRun& r = runs[i];
        w.cell(ms[i]).cell(r.w.value).cell(r.w.phase_maximized_value);
        for (int c : corners) w.cell(r.final_populations(c - 1));
        w.cell(r.peak_even_population).cell(r.plateau.plateau);
        w.end_row();
      }
    });
    return Json{{"rows", base.rows},
                {"cols", base.cols},
                {"f_j_mhz", base.f_j_mhz},
                {"theta_rad", base.theta},
                {"ideal", base.ideal},
                {"tau_ns", runs.front().tau},
                {"channels", channels.to_json()},
                {"pulse", pulse_json(base.timing)},
                {"tradeoff_crossing_m", number(tradeoff_crossing(ms, fw))},
                {"saturation_from_m", saturation_from},
                {"saturation_spread", number(sat_hi >= sat_lo ? sat_hi - sat_lo : kNaN)},
                {"results", results}};
  };
}

// ---------------------------------------------------------------------------
// solution-space

Job parse_solution_space(Fields& f) {
  const double fj = f.get("f_j_mhz", 8.3);
  const std::optional<double> tau_ns = f.optional<double>("tau_ns");
  const double d_min = f.get("delta_min_mhz", 0.0);
  const double d_max = f.get("delta_max_mhz", 60.0);
  const int d_points = f.get("delta_points", 301);
  const double c_min = f.get("coupling_min_mhz", 0.0);
  const double c_max = f.get("coupling_max_mhz", 20.0);
  const int c_points = f.get("coupling_points", 401);
  const double threshold = f.get("threshold", 0.99);
  const bool refine = f.get("refine", true);
  require_that(fj > 0, "f_j_mhz must be positive");
  require_that(d_points >= 1 && c_points >= 1, "grid sizes must be positive");
  require_that(d_max >= d_min && c_max >= c_min, "grid ranges must be ordered");
  return [=](Context& ctx) {
    const double tau = tau_ns.value_or(transfer_time(mhz_to_angular(fj)));
    auto grid = [](double lo, double hi, int n) {
      Eigen::VectorXd g(n);
      for (int i = 0; i < n; ++i) g(i) = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
      return g;
    };
    const Eigen::VectorXd d_mhz = grid(d_min, d_max, d_points);
    const Eigen::VectorXd c_mhz = grid(c_min, c_max, c_points);
    const Eigen::VectorXd d_ang = d_mhz.unaryExpr([](double v) { return mhz_to_angular(v); });
    const Eigen::VectorXd c_ang = c_mhz.unaryExpr([](double v) { return mhz_to_angular(v); });
    const Eigen::MatrixXd p3 = sweep_solution_space(tau, d_ang, c_ang);
    ctx.write("p3.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"delta_mhz", "coupling_mhz", "p3"});
      for (Eigen::Index i = 0; i < p3.rows(); ++i) {
        for (Eigen::Index k = 0; k < p3.cols(); ++k) {
          w.cell(d_mhz(i)).cell(c_mhz(k)).cell(p3(i, k));
          w.end_row();
        }
      }
    });
    const std::vector<BrightSpot> spots = bright_spots(p3, d_ang, c_ang, threshold);
    const double dd = d_points > 1 ? (d_max - d_min) / (d_points - 1) : 1.0;
    const double dc = c_points > 1 ? (c_max - c_min) / (c_points - 1) : 1.0;
    Json out = Json::array();
    ctx.write("spots.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"delta_mhz", "coupling_mhz", "p3"});
      for (const BrightSpot& s : spots) {
        double d = angular_to_mhz(s.delta), c = angular_to_mhz(s.coupling), p = s.p3;
        if (refine) {
          const Objective miss = [tau](const Eigen::VectorXd& x) {
            return 1.0 - analytic_three_site<double>(mhz_to_angular(x(0)), mhz_to_angular(x(1)), tau)[2];
          };
          NelderMeadOptions nm;
          nm.budget = 400;
          nm.f_tol = 1e-15;
          nm.x_tol = 1e-9;
          const OptimizeResult r = nelder_mead(miss, Eigen::Vector2d(d, c),
                                               Eigen::Vector2d(0.5 * dd, 0.5 * dc), nm);
          if (1.0 - r.cost >= p) {
            d = r.x(0);
            c = r.x(1);
            p = 1.0 - r.cost;
          }
        }
        w.cell(d).cell(c).cell(p);
        w.end_row();
        out.push_back(Json{{"delta_mhz", d}, {"coupling_mhz", c}, {"p3", p}});
      }
    });
    return Json{{"tau_ns", tau}, {"f_j_mhz", fj}, {"threshold", threshold}, {"spots", out}};
  };
}

// ---------------------------------------------------------------------------
// noise-sweep

Job parse_noise_sweep(Fields& f) {
  DegradationSetup base;
  base.fst = parse_fst(f);
  const std::vector<int> ms = parse_m_values(f, {0, 4, 6});
  base.target = parse_noise_target(f.get<std::string>("target", "omega_even"));
  base.sigma_grid_mhz = f.list<double>("sigma_mhz", {0.0, 10.0, 20.0, 30.0});
  base.n_samples = f.get("n_samples", 100);
  const std::string measure = f.get<std::string>("measure", "bell");
  require_that(measure == "bell" || measure == "process", "measure must be bell or process");
  base.measure = measure == "bell" ? FidelityMeasure::Bell : FidelityMeasure::Process;
  const Channels channels = parse_channels(f);
  require_that(base.n_samples >= 2, "n_samples must be at least 2");
  for (double s : base.sigma_grid_mhz) require_that(s >= 0, "sigma values must be non-negative");
  return [=](Context& ctx) {
    Json results = Json::array();
    for (int m : ms) {
      DegradationSetup s = base;
      s.fst.m = m;
      s.channels = channels.build(s.fst.n_sites);
      s.seed = ctx.seed;
      s.threads = ctx.threads;
      const DegradationCurve curve = degradation_sweep(s);
      ctx.write("curve_m" + std::to_string(m) + ".csv",
                [&](std::ostream& os) { write_curve_csv(os, curve); });
      results.push_back(Json{{"m", m},
                             {"baseline", curve.baseline},
                             {"sigma_mhz", curve.sigma_grid},
                             {"mean_ratio", curve.mean_ratio},
                             {"std", curve.std},
                             {"sem", curve.sem},
                             {"n_samples", curve.n_samples}});
    }
    return Json{{"target", noise_target_name(base.target)},
                {"measure", measure},
                {"n", base.fst.n_sites},
                {"f_j_mhz", base.fst.f_j_mhz},
                {"theta_rad", base.fst.theta},
                {"ideal", base.fst.ideal},
                {"channels", channels.to_json()},
                {"seed", ctx.seed},
                {"results", results}};
  };
}

// ---------------------------------------------------------------------------
// calibrate

Job parse_calibrate(Fields& f) {
  FstSetup fst;
  fst.n_sites = f.get("n", 5);
  fst.m = f.get("m", 4);
  fst.f_j_mhz = f.get("f_j_mhz", 9.0);
  fst.theta = f.get("theta_rad", kPi / 8.0);
  require_that(fst.n_sites >= 2 && fst.m >= 0 && fst.f_j_mhz > 0, "invalid target chain");
  const DeviceConfig device = parse_device(f, fst.n_sites);
  CalibrationConfig cal;
  cal.coupling_threshold = f.get("coupling_threshold_mhz", cal.coupling_threshold);
  cal.frequency_threshold = f.get("frequency_threshold_mhz", cal.frequency_threshold);
  cal.max_outer_iterations = f.get("max_outer_iterations", cal.max_outer_iterations);
  cal.max_inner_iterations = f.get("max_inner_iterations", cal.max_inner_iterations);
  cal.radius = f.get("radius", cal.radius);
  cal.parallel_distance = f.get("parallel_distance", cal.parallel_distance);
  cal.stagger_zpa = f.get("stagger_zpa", cal.stagger_zpa);
  cal.parallel = f.get("parallel", cal.parallel);
  std::vector<EnvironmentScheme> schemes;
  for (const auto& s : f.list<std::string>("schemes", {"staggered_average"})) {
    schemes.push_back(parse_environment_scheme(s));
  }
  cal.validate();
  return [=](Context& ctx) {
    const ChainSpec target = fst_chain(fst);
    Json results = Json::array();
    for (EnvironmentScheme scheme : schemes) {
      DeviceModel dev(device);
      CalibrationConfig c = cal;
      c.scheme = scheme;
      c.threads = ctx.threads;
      const CalibrationReport rep = calibrate_all(dev, target, c);
      const std::string name = environment_scheme_name(scheme);
      ctx.write_json("report_" + name + ".json", to_json(rep));
      ctx.write("parameters_" + name + ".csv", [&](std::ostream& os) {
        CsvWriter w(os, {"element", "index", "target_mhz", "zpa", "measured_mhz",
                         "measured_residual_mhz", "true_mhz", "true_residual_mhz",
                         "max_inner_iterations", "experiments", "converged"});
        for (const ParameterReport& p : rep.parameters) {
          w.cell(std::string(p.element.kind == Element::Qubit ? "qubit" : "coupler"));
          w.cell(p.element.index + 1).cell(p.target).cell(p.zpa).cell(p.measured);
          w.cell(p.measured_residual).cell(p.true_value).cell(p.true_residual);
          w.cell(p.max_inner_iterations).cell(p.experiments).cell(p.converged ? 1 : 0);
          w.end_row();
        }
      });
      results.push_back(Json{{"scheme", name},
                             {"converged", rep.converged},
                             {"outer_cycles", rep.outer_cycles},
                             {"max_measured_residual_mhz", rep.max_measured_residual()},
                             {"max_true_residual_mhz", rep.max_true_residual()},
                             {"max_inner_iterations", rep.max_inner_iterations()},
                             {"averaging", rep.averaging}});
    }
    return Json{{"device", device_json(device)},
                {"target", to_json(target)},
                {"coupling_threshold_mhz", cal.coupling_threshold},
                {"frequency_threshold_mhz", cal.frequency_threshold},
                {"max_outer_iterations", cal.max_outer_iterations},
                {"max_inner_iterations", cal.max_inner_iterations},
                {"radius", cal.radius},
                {"parallel_distance", cal.parallel_distance},
                {"results", results}};
  };
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeRunSpec {
  FeedbackOptions options;
  int samples = 15;
};

Job parse_optimize(Fields& f) {
  FstSetup fst = parse_fst(f);
  fst.m = f.get("m", 4);
  require_that(fst.m >= 0, "m must be non-negative");
  const DeviceConfig device = parse_device(f, fst.n_sites);
  const double perturbation = f.get("perturbation_mhz", 2.0);
  const std::optional<std::uint64_t> perturbation_seed = f.optional<std::uint64_t>("perturbation_seed");
  const std::string start = f.get<std::string>("start", "perturbed");
  const double stab_tol = f.get("stabilization_tolerance", 0.005);
  require_that(start == "perturbed" || start == "target", "start must be perturbed or target");
  std::vector<OptimizeRunSpec> runs;
  if (!f.has("runs")) schema_error(f.path("runs") + ": required");
  const Json& list = f.raw("runs");
  if (!list.is_array() || list.empty()) schema_error(f.path("runs") + ": expected a non-empty array");
  for (size_t i = 0; i < list.size(); ++i) {
    Fields r(list[i], f.path("runs") + "[" + std::to_string(i) + "]");
    OptimizeRunSpec s;
    s.options.method = parse_optimizer_method(r.require<std::string>("method"));
    s.options.budget = r.get("budget", s.options.budget);
    s.samples = r.get("samples", s.samples);
    s.options.nm_step_mhz = r.get("nm_step_mhz", s.options.nm_step_mhz);
    s.options.de_box_mhz = r.get("de_box_mhz", s.options.de_box_mhz);
    s.options.de_population = r.get("de_population", s.options.de_population);
    s.options.de_f = r.get("de_f", s.options.de_f);
    s.options.de_cr = r.get("de_cr", s.options.de_cr);
    s.options.stabilization_tolerance = stab_tol;
    r.finish();
    require_that(s.options.budget >= 1, "budget must be at least 1");
    require_that(s.samples >= 1, "samples must be at least 1");
    require_that(s.options.de_population >= 4, "de_population must be at least 4");
    runs.push_back(s);
  }
  return [=](Context& ctx) {
    const DeviceModel dev(device);
    Json results = Json::array();
    for (size_t i = 0; i < runs.size(); ++i) {
      const OptimizeRunSpec& spec = runs[i];
      const FeedbackProblem problem = make_feedback_problem(dev, fst, CostSpec{spec.samples, 0.5});
      const Eigen::VectorXd x0 =
          start == "target" ? problem.target_x
                            : perturbed_start(problem, perturbation, perturbation_seed.value_or(ctx.seed));
      FeedbackOptions opts = spec.options;
      opts.seed = ctx.seed;
      opts.threads = ctx.threads;
      const FeedbackOutcome out = optimize_feedback(problem, x0, opts);
      const std::string tag = std::to_string(i + 1) + "_" + optimizer_method_name(opts.method);
      ctx.write("trace_" + tag + ".csv", [&](std::ostream& os) {
        std::vector<std::string> header{"iteration", "cost", "best"};
        for (int k = 1; k <= problem.dimension(); ++k) header.push_back("x" + std::to_string(k));
        CsvWriter w(os, header);
        const auto& ev = out.result.trace.evaluations;
        for (size_t k = 0; k < ev.size(); ++k) {
          w.cell(static_cast<long long>(k + 1)).cell(ev[k].cost).cell(ev[k].best);
          for (Eigen::Index d = 0; d < ev[k].x.size(); ++d) w.cell(ev[k].x(d));
          w.end_row();
        }
      });
      const SampledPopulations& pop = out.final_populations;
      double max_dev = 0.0;
      ctx.write("populations_" + tag + ".csv", [&](std::ostream& os) {
        CsvWriter w(os, {"t_ns", "p_first", "p_last"});
        for (size_t k = 0; k < pop.times.size(); ++k) {
          w.cell(pop.times[k]).cell(pop.p1[k]).cell(pop.pn[k]);
          w.end_row();
          max_dev = std::max({max_dev, std::abs(pop.p1[k] - 0.5), std::abs(pop.pn[k] - 0.5)});
        }
      });
      const ChainSpec got = chain_at(problem, out.result.x);
      const ChainSpec want = chain_at(problem, problem.target_x);
      const double param_err = angular_to_mhz(
          std::max((got.frequencies - want.frequencies).cwiseAbs().maxCoeff(),
                   (got.couplings - want.couplings).cwiseAbs().maxCoeff()));
      results.push_back(Json{{"method", optimizer_method_name(opts.method)},
                             {"budget", opts.budget},
                             {"samples", spec.samples},
                             {"evaluations", out.result.trace.size()},
                             {"initial_cost", out.initial_cost},
                             {"final_cost", out.result.cost},
                             {"stabilization_iteration", out.stabilization_index},
                             {"best_non_increasing", out.result.trace.best_non_increasing()},
                             {"max_population_deviation", max_dev},
                             {"max_parameter_error_mhz", param_err},
                             {"aborted", out.result.aborted},
                             {"error", out.result.error},
                             {"hyperparameters", Json{{"nm_step_mhz", opts.nm_step_mhz},
                                                      {"de_box_mhz", opts.de_box_mhz},
                                                      {"de_population", opts.de_population},
                                                      {"de_f", opts.de_f},
                                                      {"de_cr", opts.de_cr}}},
                             {"populations", to_json(pop)}});
    }
    return Json{{"device", device_json(device)},
                {"n", fst.n_sites},
                {"m", fst.m},
                {"f_j_mhz", fst.f_j_mhz},
                {"theta_rad", fst.theta},
                {"start", start},
                {"perturbation_mhz", perturbation},
                {"stabilization_tolerance", stab_tol},
                {"results", results}};
  };
}

// ---------------------------------------------------------------------------
// three-site-oracle

Job parse_three_site_oracle(Fields& f) {
  const int triples = f.get("n_triples", 1000);
  const double d_max = f.get("delta_max_mhz", 100.0);
  const double j_max = f.get("coupling_max_mhz", 20.0);
  const double t_max = f.get("t_max_ns", 200.0);
  require_that(triples >= 1, "n_triples must be positive");
  require_that(d_max >= 0 && j_max > 0 && t_max >= 0, "oracle ranges must be non-negative");
  return [=](Context& ctx) {
    std::seed_seq seq{static_cast<std::uint32_t>(ctx.seed), static_cast<std::uint32_t>(ctx.seed >> 32),
                      0x33736974u};
    std::mt19937_64 engine(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Row {
      double d, j, t, diff;
      std::array<double, 3> p;
    };
    std::vector<Row> rows(static_cast<size_t>(triples));
    for (Row& r : rows) {
      r.d = (2.0 * u(engine) - 1.0) * d_max;
      r.j = (1.0 - u(engine)) * j_max;
      r.t = u(engine) * t_max;
    }
    parallel_for(rows.size(), ctx.threads, [&](std::size_t i) {
      Row& r = rows[i];
      const double d = mhz_to_angular(r.d), j = mhz_to_angular(r.j);
      ChainSpec spec;
      spec.n_sites = 3;
      spec.frequencies = Eigen::Vector3d(0.0, d, 0.0);
      spec.couplings = Eigen::Vector2d(j, j);
      r.p = analytic_three_site<double>(d, j, r.t);
      const Eigen::VectorXd num =
          populations(evolve_unitary(realize(spec), site_state(Basis::SingleExcitation, 3, 1), r.t));
      r.diff = 0.0;
      for (int k = 0; k < 3; ++k) r.diff = std::max(r.diff, std::abs(num(k) - r.p[k]));
    });
    double worst = 0.0;
    ctx.write("oracle.csv", [&](std::ostream& os) {
      CsvWriter w(os, {"delta_mhz", "coupling_mhz", "t_ns", "p1", "p2", "p3", "max_abs_diff"});
      for (const Row& r : rows) {
        w.cell(r.d).cell(r.j).cell(r.t).cell(r.p[0]).cell(r.p[1]).cell(r.p[2]).cell(r.diff);
        w.end_row();
        worst = std::max(worst, r.diff);
      }
    });
    return Json{{"n_triples", triples}, {"max_abs_diff", worst}};
  };
}

// ---------------------------------------------------------------------------
// Registry

struct KindEntry {
  const char* kind;
  const char* reproduces;
  Parser parse;
};

const std::vector<KindEntry>& registry() {
  static const std::vector<KindEntry> kinds = {
      {"build", "chain and lattice Hamiltonians with their single-excitation spectra", parse_build},
      {"calibrate", "secant-predicted Zpa calibration on the synthetic device", parse_calibrate},
      {"fst-run", "1D fractional transfer dynamics and Bell fidelity versus m", parse_fst_run},
      {"lattice-fst", "2D corner W-state fidelity and even-site suppression versus m",
       parse_lattice_fst},
      {"noise-sweep", "fidelity degradation F/F0 under quasi-static parameter noise",
       parse_noise_sweep},
      {"optimize", "feedback optimization of the end-site population balance", parse_optimize},
      {"pst-run", "perfect state transfer for line and zig-zag chains", parse_pst_run},
      {"solution-space", "three-site transfer population map and its bright spots",
       parse_solution_space},
      {"spectrum-check", "zig-zag target spectra and the inverse-eigenvalue round trip",
       parse_spectrum_check},
      {"three-site-oracle", "closed-form three-site populations against exact evolution",
       parse_three_site_oracle},
  };
  return kinds;
}

struct Parsed {
  std::string kind;
  std::uint64_t seed = 1;
  fs::path output_dir;
  Job job;
};

Parsed parse_config(const Json& config) {
  Fields f(config, "config");
  Parsed p;
  p.kind = f.require<std::string>("kind");
  p.seed = f.get<std::uint64_t>("seed", 1);
  p.output_dir = f.get<std::string>("output_dir", "runs");
  f.get<std::string>("description", "");
  const auto& kinds = registry();
  const auto it = std::find_if(kinds.begin(), kinds.end(),
                               [&](const KindEntry& e) { return p.kind == e.kind; });
  if (it == kinds.end()) schema_error("config.kind: unknown experiment kind '" + p.kind + "'");
  try {
    p.job = it->parse(f);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    schema_error(e.what());
  }
  f.finish();
  return p;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

fs::path fresh_directory(const fs::path& root, const std::string& base) {
  fs::path dir = root / base;
  for (int k = 2; fs::exists(dir); ++k) dir = root / (base + "-" + std::to_string(k));
  return dir;
}

}  // namespace

std::vector<ExperimentInfo> list_experiments() {
  std::vector<ExperimentInfo> out;
  for (const auto& e : registry()) out.push_back({e.kind, e.reproduces});
  std::stable_sort(out.begin(), out.end(),
                   [](const ExperimentInfo& a, const ExperimentInfo& b) { return a.kind < b.kind; });
  return out;
}

Json load_config(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Schema, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

void validate_config(const Json& config) { parse_config(config); }

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunResult run_experiment(const Json& raw, const RunOptions& options) {
  Json config = raw;
  if (options.seed && config.is_object()) config["seed"] = *options.seed;
  Parsed parsed = parse_config(config);
  const fs::path root = options.out.value_or(parsed.output_dir);
  const std::string hash = config_hash(config);

  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + root.string() + ": " + ec.message());
  static std::atomic<unsigned> counter{0};
  const auto tick = std::chrono::steady_clock::now().time_since_epoch().count();
  const fs::path tmp = root / (".partial-" + parsed.kind + "-" + hash + "-" + std::to_string(tick) +
                               "-" + std::to_string(counter++));
  fs::create_directory(tmp, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + tmp.string() + ": " + ec.message());

  Context ctx;
  ctx.dir = tmp;
  ctx.seed = parsed.seed;
  ctx.threads = std::max(1, options.threads);
  RunResult result;
  try {
    result.summary = parsed.job(ctx);
    result.summary["kind"] = parsed.kind;
    ctx.write_json("summary.json", result.summary);
    Json manifest{{"tool", "zigzag"},
                  {"library_version", kLibraryVersion},
                  {"kind", parsed.kind},
                  {"config_hash", hash},
                  {"seed", parsed.seed},
                  {"threads", ctx.threads},
                  {"timestamp_utc", utc_timestamp()},
                  {"config", config},
                  {"outputs", ctx.files}};
    ctx.write_json("manifest.json", manifest);
    result.directory = fresh_directory(root, parsed.kind + "-" + hash);
    fs::rename(tmp, result.directory, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot finalize " + result.directory.string() + ": " + ec.message());
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
  result.files = ctx.files;
  result.files.push_back("manifest.json");
  return result;
}

RunResult run_config_file(const fs::path& path, const RunOptions& options) {
  return run_experiment(load_config(path), options);
}

int exit_code(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return 3;
  switch (err->kind()) {
    case ErrorKind::Schema:
    case ErrorKind::InvalidSize:
    case ErrorKind::UnsupportedParity:
    case ErrorKind::Precondition:
    case ErrorKind::OutOfRange:
    case ErrorKind::Resolution:
    case ErrorKind::DegenerateSpectrum:
      return 2;
    case ErrorKind::Io:
      return 4;
    default:
      return 3;
  }
}

Json error_record(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return Json{{"error", Json{{"kind", err ? error_kind_name(err->kind()) : "internal"},
                             {"message", e.what()},
                             {"exit_code", exit_code(e)}}}};
}

}  // namespace zigzag
