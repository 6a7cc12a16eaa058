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

#include "zigzag/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <map>

#include "zigzag/errors.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

using cd = std::complex<double>;
constexpr cd kI(0.0, 1.0);

// ---------------------------------------------------------------------------
// Channels

NoiseChannelSet NoiseChannelSet::none(int n_sites) {
  const double inf = std::numeric_limits<double>::infinity();
  return {Eigen::VectorXd::Constant(n_sites, inf), Eigen::VectorXd::Constant(n_sites, inf)};
}

NoiseChannelSet NoiseChannelSet::uniform(int n_sites, double t1_us, double t2_us) {
  NoiseChannelSet c{Eigen::VectorXd::Constant(n_sites, t1_us),
                    Eigen::VectorXd::Constant(n_sites, t2_us)};
  c.validate();
  return c;
}

NoiseChannelSet NoiseChannelSet::from_tphi(int n_sites, double t1_us, double tphi_us) {
  const double inv_t2 = 1.0 / tphi_us + 0.5 / t1_us;
  return uniform(n_sites, t1_us, 1.0 / inv_t2);
}

double NoiseChannelSet::relaxation_rate(int site) const {
  return 1.0 / us_to_ns(t1_us(site));
}

double NoiseChannelSet::dephasing_rate(int site) const {
  const double r = 1.0 / us_to_ns(t2_us(site)) - 0.5 * relaxation_rate(site);
  return std::max(r, 0.0);
}

double NoiseChannelSet::tphi_us(int site) const {
  return 1.0 / (1.0 / t2_us(site) - 0.5 / t1_us(site));
}

bool NoiseChannelSet::enabled() const {
  for (int k = 0; k < size(); ++k) {
    if (relaxation_rate(k) > 0.0 || dephasing_rate(k) > 0.0) return true;
  }
  return false;
}

void NoiseChannelSet::validate() const {
  if (t1_us.size() != t2_us.size()) {
    throw Error(ErrorKind::Invariant, "T1 and T2 lists differ in length");
  }
  for (int k = 0; k < size(); ++k) {
    if (!(t1_us(k) > 0.0) || !(t2_us(k) > 0.0)) {
      throw Error(ErrorKind::Invariant, "T1 and T2 must be positive");
    }
    if (std::isinf(t2_us(k))) continue;
    if (t2_us(k) > 2.0 * t1_us(k) * (1.0 + 1e-12)) {
      throw Error(ErrorKind::Invariant, "unphysical channels: T2 exceeds 2 T1");
    }
  }
}

std::vector<Eigen::MatrixXcd> collapse_operators(const NoiseChannelSet& ch,
                                                 Basis basis, int n_sites) {
  if (ch.size() != n_sites) {
    throw Error(ErrorKind::InvalidSize, "one T1/T2 pair per site is required");
  }
  ch.validate();
  const int d = basis_dimension(basis, n_sites);
  std::vector<Eigen::MatrixXcd> ops;
  for (int k = 0; k < n_sites; ++k) {
    const double g1 = ch.relaxation_rate(k);
    const double gphi = ch.dephasing_rate(k);
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd number = Eigen::MatrixXcd::Zero(d, d);
    if (basis == Basis::SingleExcitation) {
      lower(0, k + 1) = 1.0;
      number(k + 1, k + 1) = 1.0;
    } else {
      const unsigned bit = 1u << (n_sites - 1 - k);
      for (unsigned s = 0; s < static_cast<unsigned>(d); ++s) {
        if (s & bit) {
          lower(s ^ bit, s) = 1.0;
          number(s, s) = 1.0;
        }
      }
    }
    if (g1 > 0.0) ops.push_back(std::sqrt(g1) * lower);
    if (gphi > 0.0) ops.push_back(std::sqrt(2.0 * gphi) * number);
  }
  return ops;
}

Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& h,
                             const std::vector<Eigen::MatrixXcd>& collapse) {
  const Eigen::Index d = h.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  // vec(A rho B) = (B^T kron A) vec(rho)
  Eigen::MatrixXcd l = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                              Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& c : collapse) {
    const Eigen::MatrixXcd k = c.adjoint() * c;
    l += Eigen::kroneckerProduct(c.conjugate(), c).eval();
    l -= 0.5 * Eigen::kroneckerProduct(id, k).eval();
    l -= 0.5 * Eigen::kroneckerProduct(k.transpose(), id).eval();
  }
  return l;
}

// ---------------------------------------------------------------------------
// Static evolution

Eigen::MatrixXcd propagator(const HamiltonianMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
  const Eigen::VectorXcd phases =
      (-kI * t * es.eigenvalues().cast<cd>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

QuantumState evolve_unitary(const HamiltonianMatrix& h, const QuantumState& psi0,
                            double t) {
  require_same_basis(psi0, h);
  if (t == 0.0) return psi0;
  const Eigen::MatrixXcd u = propagator(h, t);
  if (psi0.is_pure()) {
    return QuantumState(h.basis, h.n_sites, Eigen::VectorXcd(u * psi0.vector()));
  }
  return QuantumState(h.basis, h.n_sites,
                      Eigen::MatrixXcd(u * psi0.matrix() * u.adjoint()));
}

// ---------------------------------------------------------------------------
// Scheduled evolution

namespace {

// Parameters sharing a pulse profile are summed into one generator, so
// H(t) = sum_g s_g(t) H_g with unit-amplitude profiles s_g.
struct Drive {
  PulseShape unit;
  Eigen::MatrixXcd h;
};

bool same_profile(const PulseShape& a, const PulseShape& b) {
  return a.sigma == b.sigma && a.buffer == b.buffer && a.plateau == b.plateau &&
         a.alignment == b.alignment;
}

std::vector<Drive> build_drives(const Schedule& schedule, const SiteGraph& graph,
                                Basis basis) {
  validate(schedule, graph);
  std::vector<PulseShape> profiles;
  std::vector<SiteGraph> parts;
  auto slot = [&](const PulseShape& p) -> SiteGraph& {
    for (size_t i = 0; i < profiles.size(); ++i) {
      if (same_profile(profiles[i], p)) return parts[i];
    }
    PulseShape unit = p;
    unit.amplitude = 1.0;
    profiles.push_back(unit);
    SiteGraph empty = graph;
    empty.onsite.setZero();
    for (auto& e : empty.edges) e.j = 0.0;
    parts.push_back(empty);
    return parts.back();
  };
  for (int k = 0; k < graph.size(); ++k) {
    slot(schedule.frequency_pulses[k]).onsite(k) = graph.onsite(k);
  }
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    slot(schedule.coupling_pulses[e]).edges[e].j = graph.edges[e].j;
  }
  std::vector<Drive> drives;
  for (size_t i = 0; i < profiles.size(); ++i) {
    drives.push_back({profiles[i], realize(parts[i], basis).matrix});
  }
  return drives;
}

void check_resolution(const Schedule& schedule) {
  auto check = [&](const PulseShape& p) {
    const bool has_edge = p.alignment == EdgeAlignment::Outer || p.buffer > 0.0;
    if (has_edge && schedule.dt > p.sigma / 5.0 + 1e-15) {
      throw Error(ErrorKind::Resolution, "dt does not resolve pulse edges (dt > sigma/5)");
    }
  };
  for (const auto& p : schedule.frequency_pulses) check(p);
  for (const auto& p : schedule.coupling_pulses) check(p);
}

double norm_bound(const std::vector<Drive>& drives) {
  double b = 0.0;
  for (const auto& d : drives) {
    b += d.h.cwiseAbs().rowwise().sum().maxCoeff();
  }
  return b;
}

Eigen::MatrixXcd hamiltonian_at(const std::vector<Drive>& drives, double t) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(drives.front().h.rows(), drives.front().h.cols());
  for (const auto& d : drives) {
    const double s = flattop_gaussian(t, d.unit);
    if (s != 0.0) h += s * d.h;
  }
  return h;
}

Eigen::MatrixXcd static_hamiltonian(const std::vector<Drive>& drives) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(drives.front().h.rows(), drives.front().h.cols());
  for (const auto& d : drives) h += d.h;
  return h;
}

// Shared segment driver: RK4 on the ramps, exact propagation on the
// plateau, states recorded on a fixed time lattice.
template <class Model>
Trajectory drive(const Schedule& schedule, Model& model,
                 typename Model::State x, const EvolutionOptions& opt,
                 double rate_bound) {
  Trajectory traj;
  const double total = schedule.duration;
  const double interval = opt.record_interval;
  double next = interval > 0.0 ? interval : total;
  traj.times.push_back(0.0);
  traj.states.push_back(model.wrap(x));

  auto record = [&](double t, bool last) {
    const double eps = 1e-9;
    if (last || (interval > 0.0 && t >= next - eps)) {
      if (traj.times.back() < t - eps) {
        traj.times.push_back(t);
        traj.states.push_back(model.wrap(x));
      }
      while (interval > 0.0 && next <= t + eps) next += interval;
    }
  };

  const double hmax = std::min(schedule.dt, opt.max_phase_step / std::max(rate_bound, 1e-300));
  auto ramp = [&](double t0, double t1) {
    if (t1 <= t0) return;
    const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / hmax - 1e-9)));
    const double h = (t1 - t0) / double(n);
    for (long i = 0; i < n; ++i) {
      const double t = t0 + double(i) * h;
      const auto k1 = model.deriv(t, x);
      const auto k2 = model.deriv(t + 0.5 * h, x + (0.5 * h) * k1);
      const auto k3 = model.deriv(t + 0.5 * h, x + (0.5 * h) * k2);
      const auto k4 = model.deriv(t + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      record(i + 1 == n ? t1 : t + h, false);
    }
  };

  double a = schedule.static_begin(), b = schedule.static_end();
  if (!opt.exact_static || b <= a || !model.can_propagate_exactly()) {
    a = b = total;
  }
  ramp(0.0, a);
  if (b > a) {
    double t = a;
    while (t < b - 1e-12) {
      double stop = b;
      if (interval > 0.0 && next < b - 1e-12) stop = std::max(next, t);
      model.propagate_static(x, stop - t);
      t = stop;
      record(t, false);
    }
  }
  ramp(b, total);
  record(total, true);
  return traj;
}

struct PureModel {
  using State = Eigen::VectorXcd;
  const std::vector<Drive>& drives;
  Basis basis;
  int n_sites;
  Eigen::MatrixXcd h_static;
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd vals;

  PureModel(const std::vector<Drive>& d, Basis b, int n)
      : drives(d), basis(b), n_sites(n), h_static(static_hamiltonian(d)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_static);
    vecs = es.eigenvectors();
    vals = es.eigenvalues();
  }
  bool can_propagate_exactly() const { return true; }
  State deriv(double t, const State& psi) const {
    return -kI * (hamiltonian_at(drives, t) * psi);
  }
  void propagate_static(State& psi, double dt) const {
    const Eigen::VectorXcd ph = (-kI * dt * vals.cast<cd>()).array().exp().matrix();
    psi = vecs * (ph.asDiagonal() * (vecs.adjoint() * psi));
  }
  QuantumState wrap(const State& psi) const { return QuantumState(basis, n_sites, psi); }
};

struct DensityModel {
  using State = Eigen::MatrixXcd;
  const std::vector<Drive>& drives;
  Basis basis;
  int n_sites;
  std::vector<Eigen::MatrixXcd> collapse;
  Eigen::MatrixXcd anti;   // sum_k L_k^dagger L_k
  Eigen::MatrixXcd jump;   // superoperator of sum_k L rho L^dagger (small dims)
  bool use_jump = false;
  int max_expm_dim;
  Eigen::MatrixXcd h_static;
  std::map<long long, Eigen::MatrixXcd> expm_cache;
  Eigen::MatrixXcd liouv;
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd vals;
  bool dissipative;

  DensityModel(const std::vector<Drive>& d, Basis b, int n,
               std::vector<Eigen::MatrixXcd> c, int max_dim)
      : drives(d), basis(b), n_sites(n), collapse(std::move(c)),
        max_expm_dim(max_dim), h_static(static_hamiltonian(d)) {
    const Eigen::Index dim = h_static.rows();
    anti = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& l : collapse) anti += l.adjoint() * l;
    dissipative = !collapse.empty();
    if (dissipative && dim <= 16) {
      use_jump = true;
      jump = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
      for (const auto& l : collapse) jump += Eigen::kroneckerProduct(l.conjugate(), l).eval();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_static);
    vecs = es.eigenvectors();
    vals = es.eigenvalues();
  }
  bool can_propagate_exactly() const {
    return !dissipative || h_static.rows() <= max_expm_dim;
  }
  State dissipate(const State& rho) const {
    State out = -0.5 * (anti * rho + rho * anti);
    if (use_jump) {
      Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
      const Eigen::VectorXcd j = jump * v;
      out += Eigen::Map<const Eigen::MatrixXcd>(j.data(), rho.rows(), rho.cols());
    } else {
      for (const auto& l : collapse) out += l * rho * l.adjoint();
    }
    return out;
  }
  State deriv(double t, const State& rho) const {
    const Eigen::MatrixXcd h = hamiltonian_at(drives, t);
    State out = -kI * (h * rho - rho * h);
    if (dissipative) out += dissipate(rho);
    return out;
  }
  void propagate_static(State& rho, double dt) {
    if (!dissipative) {
      const Eigen::VectorXcd ph = (-kI * dt * vals.cast<cd>()).array().exp().matrix();
      const Eigen::MatrixXcd u = vecs * ph.asDiagonal() * vecs.adjoint();
      rho = u * rho * u.adjoint();
      return;
    }
    // Chunk lengths repeat up to rounding; key the cache at 1e-12 ns.
    const long long key = std::llround(dt * 1e12);
    auto it = expm_cache.find(key);
    if (it == expm_cache.end()) {
      if (liouv.size() == 0) liouv = liouvillian(h_static, collapse);
      const Eigen::MatrixXcd gen = liouv * (double(key) * 1e-12);
      it = expm_cache.emplace(key, gen.exp()).first;
    }
    Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
    const Eigen::VectorXcd out = it->second * v;
    rho = Eigen::Map<const Eigen::MatrixXcd>(out.data(), rho.rows(), rho.cols());
  }
  QuantumState wrap(const State& rho) const { return QuantumState(basis, n_sites, rho); }
};

void require_state_basis(const QuantumState& s, Basis basis, int n_sites) {
  if (s.basis() != basis || s.n_sites() != n_sites) {
    throw Error(ErrorKind::BasisMismatch, "initial state basis differs from the requested basis");
  }
}

}  // namespace

Trajectory evolve_schedule(const Schedule& schedule, const SiteGraph& graph,
                           const QuantumState& psi0, const EvolutionOptions& options) {
  const Basis basis = psi0.basis();
  require_state_basis(psi0, basis, graph.size());
  if (!psi0.is_pure()) {
    throw Error(ErrorKind::Precondition, "evolve_schedule needs a pure state");
  }
  check_resolution(schedule);
  const std::vector<Drive> drives = build_drives(schedule, graph, basis);
  PureModel model(drives, basis, graph.size());
  return drive(schedule, model, psi0.vector(), options, norm_bound(drives));
}

Trajectory evolve_lindblad(const Schedule& schedule, const SiteGraph& graph,
                           const QuantumState& rho0, const NoiseChannelSet& channels,
                           Basis basis, const EvolutionOptions& options) {
  require_state_basis(rho0, basis, graph.size());
  check_resolution(schedule);
  const std::vector<Drive> drives = build_drives(schedule, graph, basis);
  std::vector<Eigen::MatrixXcd> ops = collapse_operators(channels, basis, graph.size());
  double rate = norm_bound(drives);
  for (const auto& l : ops) rate += (l.adjoint() * l).cwiseAbs().maxCoeff();
  DensityModel model(drives, basis, graph.size(), std::move(ops), options.max_expm_dim);
  return drive(schedule, model, rho0.density(), options, rate);
}

Trajectory evolve_lindblad(const Schedule& schedule, const ChainSpec& spec,
                           const QuantumState& rho0, const NoiseChannelSet& channels,
                           Basis basis, const EvolutionOptions& options) {
  return evolve_lindblad(schedule, site_graph(spec), rho0, channels, basis, options);
}

Trajectory evolve_lindblad(const Schedule& schedule, const LatticeSpec& spec,
                           const QuantumState& rho0, const NoiseChannelSet& channels,
                           Basis basis, const EvolutionOptions& options) {
  return evolve_lindblad(schedule, site_graph(spec), rho0, channels, basis, options);
}

// ---------------------------------------------------------------------------
// Three-site solution space

Eigen::MatrixXd sweep_solution_space(double tau, const Eigen::VectorXd& delta_grid,
                                     const Eigen::VectorXd& coupling_grid) {
  Eigen::MatrixXd p3(delta_grid.size(), coupling_grid.size());
  for (Eigen::Index i = 0; i < delta_grid.size(); ++i) {
    for (Eigen::Index j = 0; j < coupling_grid.size(); ++j) {
      p3(i, j) = analytic_three_site<double>(delta_grid(i), coupling_grid(j), tau)[2];
    }
  }
  return p3;
}

std::vector<BrightSpot> bright_spots(const Eigen::MatrixXd& p3,
                                     const Eigen::VectorXd& delta_grid,
                                     const Eigen::VectorXd& coupling_grid,
                                     double threshold) {
  std::vector<BrightSpot> spots;
  const Eigen::Index nr = p3.rows(), nc = p3.cols();
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) {
      const double v = p3(i, j);
      if (!(v > threshold)) continue;
      bool peak = true;
      for (Eigen::Index di = -1; di <= 1 && peak; ++di) {
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const Eigen::Index a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= nr || b >= nc) continue;
          // Ties resolve toward the lexicographically first cell.
          const bool earlier = di < 0 || (di == 0 && dj < 0);
          if (p3(a, b) > v || (earlier && p3(a, b) == v)) {
            peak = false;
            break;
          }
        }
      }
      if (peak) spots.push_back({delta_grid(i), coupling_grid(j), v});
    }
  }
  return spots;
}

}  // namespace zigzag
