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

#include "zigzag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "zigzag/errors.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

using cd = std::complex<double>;

const char* target_name(TargetKind t) {
  switch (t) {
    case TargetKind::BellSinglet: return "bell_singlet";
    case TargetKind::W4: return "w4";
    case TargetKind::Custom: return "custom";
  }
  return "custom";
}

namespace {

void check_sites(const std::vector<int>& sites, int n) {
  if (sites.empty()) throw Error(ErrorKind::InvalidSize, "no sites to keep");
  for (size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 1 || sites[i] > n) {
      throw Error(ErrorKind::OutOfRange, "site " + std::to_string(sites[i]) + " out of range");
    }
    for (size_t j = 0; j < i; ++j) {
      if (sites[i] == sites[j]) throw Error(ErrorKind::Precondition, "sites must be distinct");
    }
  }
}

}  // namespace

QuantumState reduce_to_sites(const QuantumState& state, const std::vector<int>& sites) {
  const int n = state.n_sites();
  check_sites(sites, n);
  const int s = static_cast<int>(sites.size());
  if (s > 16) throw Error(ErrorKind::InvalidSize, "register too large");
  const Eigen::MatrixXcd rho = state.density();
  const int rd = 1 << s;
  Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(rd, rd);

  if (state.basis() == Basis::SingleExcitation) {
    // reg[i]: register index of basis state i; env[i]: excited traced site or 0.
    std::vector<int> reg(n + 1, 0), env(n + 1, 0);
    for (int k = 1; k <= n; ++k) {
      const auto it = std::find(sites.begin(), sites.end(), k);
      if (it != sites.end()) {
        reg[k] = 1 << (s - 1 - static_cast<int>(it - sites.begin()));
      } else {
        env[k] = k;
      }
    }
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        if (env[i] == env[j]) red(reg[i], reg[j]) += rho(i, j);
      }
    }
    return QuantumState(Basis::Full, s, red);
  }

  const unsigned d = 1u << n;
  unsigned keep = 0;
  for (int q : sites) keep |= 1u << (n - q);
  auto project = [&](unsigned x) {
    unsigned r = 0;
    for (int i = 0; i < s; ++i) {
      if (x & (1u << (n - sites[i]))) r |= 1u << (s - 1 - i);
    }
    return r;
  };
  std::vector<unsigned> rmap(d);
  for (unsigned x = 0; x < d; ++x) rmap[x] = project(x);
  for (unsigned i = 0; i < d; ++i) {
    for (unsigned j = 0; j < d; ++j) {
      if ((i & ~keep) == (j & ~keep)) red(rmap[i], rmap[j]) += rho(i, j);
    }
  }
  return QuantumState(Basis::Full, s, red);
}

Eigen::VectorXcd bell_singlet() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

Eigen::VectorXcd w_state4() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(8) = v(4) = v(2) = v(1) = 0.5;
  return v;
}

FidelityReport state_fidelity(const QuantumState& rho, const Eigen::VectorXcd& target,
                              TargetKind kind) {
  if (target.size() != rho.dim()) {
    throw Error(ErrorKind::BasisMismatch, "target and state dimensions differ");
  }
  const Eigen::MatrixXcd r = rho.density();
  FidelityReport rep;
  rep.target = kind;
  rep.value = (target.adjoint() * r * target)(0, 0).real();

  // Coordinate ascent over the phases of the target's support, restarted
  // from a grid of quarter-turn phases on up to three components.
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < target.size(); ++k) {
    if (std::abs(target(k)) > 1e-14) support.push_back(k);
  }
  const int free = std::min<int>(3, std::max<int>(0, static_cast<int>(support.size()) - 1));
  int starts = 1;
  for (int k = 0; k < free; ++k) starts *= 4;
  double best = rep.value;
  for (int start = 0; start < starts; ++start) {
    Eigen::VectorXcd v = target;
    for (int k = 0, code = start; k < free; ++k, code /= 4) {
      v(support[k + 1]) *= std::polar(1.0, 0.5 * kPi * (code % 4));
    }
    double current = (v.adjoint() * r * v)(0, 0).real();
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double before = current;
      for (size_t ia = 1; ia < support.size(); ++ia) {
        const Eigen::Index a = support[ia];
        cd z(0.0, 0.0);
        for (Eigen::Index b : support) {
          if (b != a) z += r(a, b) * v(b);
        }
        if (std::abs(z) == 0.0) continue;
        v(a) = std::abs(target(a)) * z / std::abs(z);
        current = (v.adjoint() * r * v)(0, 0).real();
      }
      if (current - before < 1e-15) break;
    }
    best = std::max(best, current);
  }
  rep.phase_maximized_value = std::max(best, rep.value);
  return rep;
}

FidelityReport bell_fidelity(const QuantumState& rho2) {
  if (rho2.basis() != Basis::Full || rho2.n_sites() != 2) {
    throw Error(ErrorKind::BasisMismatch, "Bell fidelity needs a two-qubit register");
  }
  return state_fidelity(rho2, bell_singlet(), TargetKind::BellSinglet);
}

FidelityReport w_fidelity(const QuantumState& rho4) {
  if (rho4.basis() != Basis::Full || rho4.n_sites() != 4) {
    throw Error(ErrorKind::BasisMismatch, "W fidelity needs a four-qubit register");
  }
  return state_fidelity(rho4, w_state4(), TargetKind::W4);
}

QuantumState apply_local_phases(const QuantumState& reg, const std::vector<double>& phases) {
  const int n = reg.n_sites();
  if (reg.basis() != Basis::Full || static_cast<int>(phases.size()) != n) {
    throw Error(ErrorKind::BasisMismatch, "one phase per register qubit is required");
  }
  const unsigned d = 1u << n;
  Eigen::VectorXcd diag(d);
  for (unsigned x = 0; x < d; ++x) {
    double ph = 0.0;
    for (int q = 0; q < n; ++q) {
      if (x & (1u << (n - 1 - q))) ph += phases[q];
    }
    diag(x) = std::polar(1.0, ph);
  }
  if (reg.is_pure()) {
    return QuantumState(Basis::Full, n, Eigen::VectorXcd(diag.cwiseProduct(reg.vector())));
  }
  return QuantumState(Basis::Full, n,
                      Eigen::MatrixXcd(diag.asDiagonal() * reg.matrix() * diag.conjugate().asDiagonal()));
}

Eigen::VectorXd populations(const QuantumState& s) {
  const int n = s.n_sites();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  auto diag = [&](Eigen::Index i) {
    return s.is_pure() ? std::norm(s.vector()(i)) : s.matrix()(i, i).real();
  };
  if (s.basis() == Basis::SingleExcitation) {
    for (int k = 0; k < n; ++k) p(k) = diag(k + 1);
    return p;
  }
  const unsigned d = 1u << n;
  for (unsigned x = 0; x < d; ++x) {
    const double w = diag(x);
    for (int k = 0; k < n; ++k) {
      if (x & (1u << (n - 1 - k))) p(k) += w;
    }
  }
  return p;
}

double vacuum_population(const QuantumState& s) {
  return s.is_pure() ? std::norm(s.vector()(0)) : s.matrix()(0, 0).real();
}

}  // namespace zigzag
