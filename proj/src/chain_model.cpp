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

#include "zigzag/chain_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "zigzag/errors.hpp"

namespace zigzag {

namespace {

// Odd-site indicator, n is 1-based.
int mu(int n) { return (n % 2 == 1) ? 1 : 0; }

void require_positive_coupling(double j) {
  if (!(j > 0.0) || !std::isfinite(j)) {
    throw Error(ErrorKind::Precondition, "base coupling J must be positive");
  }
}

void require_odd(int n, const char* who) {
  if (n % 2 == 0) {
    throw Error(ErrorKind::UnsupportedParity,
                std::string(who) + " requires odd N, got " + std::to_string(n));
  }
  if (n < 3) {
    throw Error(ErrorKind::InvalidSize,
                std::string(who) + " requires N >= 3, got " + std::to_string(n));
  }
}

std::string bit_label(unsigned s, int n) {
  std::string out(static_cast<size_t>(n), '0');
  for (int k = 0; k < n; ++k) {
    if (s & (1u << (n - 1 - k))) out[static_cast<size_t>(k)] = '1';
  }
  return out;
}

}  // namespace

const char* chain_kind_name(ChainKind kind) {
  switch (kind) {
    case ChainKind::Line: return "line";
    case ChainKind::Zigzag: return "zigzag";
    case ChainKind::Fst: return "fst";
    case ChainKind::Effective: return "effective";
    case ChainKind::Custom: return "custom";
  }
  return "custom";
}

ChainKind parse_chain_kind(const std::string& name) {
  if (name == "line") return ChainKind::Line;
  if (name == "zigzag") return ChainKind::Zigzag;
  if (name == "fst") return ChainKind::Fst;
  if (name == "effective") return ChainKind::Effective;
  if (name == "custom") return ChainKind::Custom;
  throw Error(ErrorKind::Schema, "unknown chain kind '" + name + "'");
}

int basis_dimension(Basis basis, int n_sites) {
  return basis == Basis::SingleExcitation ? n_sites + 1 : (1 << n_sites);
}

ChainSpec build_line(int n, double j) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidSize, "line chain requires N >= 2");
  }
  require_positive_coupling(j);
  ChainSpec spec;
  spec.n_sites = n;
  spec.frequencies = Eigen::VectorXd::Zero(n);
  spec.couplings.resize(n - 1);
  for (int k = 1; k < n; ++k) {
    spec.couplings(k - 1) = 0.5 * j * std::sqrt(double(k) * double(n - k));
  }
  spec.meta = {ChainKind::Line, 0, j, 0.0};
  return spec;
}

ChainSpec build_zigzag(int n, int m, double j) {
  require_odd(n, "zig-zag chain");
  if (m < 0) throw Error(ErrorKind::Precondition, "m must be non-negative");
  require_positive_coupling(j);
  const double gap = 2.0 * m * j;
  ChainSpec spec;
  spec.n_sites = n;
  spec.frequencies.resize(n);
  spec.couplings.resize(n - 1);
  for (int k = 1; k <= n; ++k) {
    spec.frequencies(k - 1) = (1 - mu(k)) * gap;
  }
  for (int k = 1; k < n; ++k) {
    // Integer factors keep the product exact, so mirror pairs agree bitwise.
    const double a = double(k + mu(k) * 2 * m);
    const double b = double(n - k + mu(k + 1) * 2 * m);
    spec.couplings(k - 1) = 0.5 * j * std::sqrt(a * b);
  }
  // m = 0 collapses to the line configuration, metadata included.
  spec.meta = {m == 0 ? ChainKind::Line : ChainKind::Zigzag, m, j, 0.0};
  return spec;
}

double mirror_residual(const ChainSpec& spec) {
  const int n = spec.n_sites;
  double r = 0.0;
  for (int k = 0; k < n; ++k) {
    r = std::max(r, std::abs(spec.frequencies(k) - spec.frequencies(n - 1 - k)));
  }
  for (int k = 0; k + 1 < n; ++k) {
    r = std::max(r, std::abs(std::abs(spec.couplings(k)) -
                             std::abs(spec.couplings(n - 2 - k))));
  }
  return r;
}

void validate(const ChainSpec& spec) {
  if (spec.n_sites < 1 || spec.frequencies.size() != spec.n_sites ||
      spec.couplings.size() != std::max(0, spec.n_sites - 1)) {
    throw Error(ErrorKind::Invariant, "chain parameter sizes disagree with N");
  }
  if (!spec.frequencies.allFinite() || !spec.couplings.allFinite()) {
    throw Error(ErrorKind::Invariant, "chain parameters must be finite");
  }
}

ChainSpec apply_fst_deformation(const ChainSpec& spec, double theta) {
  validate(spec);
  const int n = spec.n_sites;
  if (n < 2) throw Error(ErrorKind::InvalidSize, "FST needs N >= 2");
  const double scale =
      std::max({1.0, spec.frequencies.cwiseAbs().maxCoeff(),
                spec.couplings.size() ? spec.couplings.cwiseAbs().maxCoeff() : 0.0});
  if (mirror_residual(spec) > 1e-12 * scale) {
    throw Error(ErrorKind::Precondition,
                "FST deformation requires a mirror-symmetric chain");
  }
  ChainSpec out = spec;
  const double c = std::cos(theta), s = std::sin(theta);
  if (n % 2 == 1) {
    if (n < 3) throw Error(ErrorKind::InvalidSize, "odd-N FST needs N >= 3");
    const int k = (n - 1) / 2;  // 1-based index of the left middle coupling
    out.couplings(k - 1) *= (c + s);
    out.couplings(k) *= (c - s);
  } else {
    const int k = n / 2;
    const double jm = spec.couplings(k - 1);
    const double w = spec.frequencies(k - 1);
    // Sign chosen so exp(-iH pi/J)|1> reproduces the first column of VRV.
    out.couplings(k - 1) = std::cos(2.0 * theta) * jm;
    out.frequencies(k - 1) = w + std::sin(2.0 * theta) * jm;
    out.frequencies(k) = w - std::sin(2.0 * theta) * jm;
  }
  if (theta != 0.0) out.meta.kind = ChainKind::Fst;
  out.meta.theta = theta;
  return out;
}

ChainSpec build_effective_limit(int n, double j) {
  require_odd(n, "effective chain");
  require_positive_coupling(j);
  const int len = (n + 1) / 2;
  ChainSpec spec;
  spec.n_sites = len;
  spec.frequencies = Eigen::VectorXd::Constant(len, -j * (n - 1) / 4.0);
  spec.couplings.resize(len - 1);
  for (int k = 1; k < len; ++k) {
    spec.couplings(k - 1) = -0.5 * j * std::sqrt(double(k) * double(len - k));
  }
  spec.meta = {ChainKind::Effective, 0, j, 0.0};
  return spec;
}

LatticeSpec build_lattice(int rows, int cols, int m, double j,
                          std::optional<double> theta) {
  auto chain = [&](int n) {
    ChainSpec c = (m == 0) ? build_line(n, j) : build_zigzag(n, m, j);
    if (theta) c = apply_fst_deformation(c, *theta);
    return c;
  };
  if (rows < 2 || cols < 2) {
    throw Error(ErrorKind::InvalidSize, "lattice needs at least 2x2 sites");
  }
  LatticeSpec lat;
  lat.rows = rows;
  lat.cols = cols;
  lat.row_chain = chain(cols);
  lat.col_chain = chain(rows);
  return lat;
}

SiteGraph site_graph(const ChainSpec& spec) {
  validate(spec);
  SiteGraph g;
  g.onsite = spec.frequencies;
  for (int k = 0; k + 1 < spec.n_sites; ++k) {
    g.edges.push_back({k, k + 1, spec.couplings(k)});
  }
  return g;
}

SiteGraph site_graph(const LatticeSpec& spec) {
  validate(spec.row_chain);
  validate(spec.col_chain);
  const int R = spec.rows, C = spec.cols;
  if (spec.row_chain.n_sites != C || spec.col_chain.n_sites != R) {
    throw Error(ErrorKind::Invariant, "lattice chain lengths disagree with grid");
  }
  SiteGraph g;
  g.onsite.resize(R * C);
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      g.onsite(r * C + c) =
          spec.col_chain.frequencies(r) + spec.row_chain.frequencies(c);
    }
  }
  // Horizontal bonds first (row-major), then vertical bonds.
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c + 1 < C; ++c) {
      g.edges.push_back({r * C + c, r * C + c + 1, spec.row_chain.couplings(c)});
    }
  }
  for (int r = 0; r + 1 < R; ++r) {
    for (int c = 0; c < C; ++c) {
      g.edges.push_back({r * C + c, (r + 1) * C + c, spec.col_chain.couplings(r)});
    }
  }
  return g;
}

HamiltonianMatrix realize(const SiteGraph& graph, Basis basis) {
  const int n = graph.size();
  HamiltonianMatrix h;
  h.basis = basis;
  h.n_sites = n;
  if (basis == Basis::SingleExcitation) {
    h.matrix = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    h.labels.push_back("vac");
    for (int k = 0; k < n; ++k) {
      h.matrix(k + 1, k + 1) = graph.onsite(k);
      h.labels.push_back(std::to_string(k + 1));
    }
    for (const auto& e : graph.edges) {
      h.matrix(e.a + 1, e.b + 1) += e.j;
      h.matrix(e.b + 1, e.a + 1) += e.j;
    }
    return h;
  }
  if (n > kMaxFullSpaceSites) {
    throw Error(ErrorKind::InvalidSize,
                "full-space basis supports at most 12 sites");
  }
  const unsigned dim = 1u << n;
  h.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  auto bit = [n](int site) { return 1u << (n - 1 - site); };
  for (unsigned s = 0; s < dim; ++s) {
    h.labels.push_back(bit_label(s, n));
    double diag = 0.0;
    for (int k = 0; k < n; ++k) {
      if (s & bit(k)) diag += graph.onsite(k);
    }
    h.matrix(s, s) = diag;
    for (const auto& e : graph.edges) {
      const bool oa = s & bit(e.a), ob = s & bit(e.b);
      if (oa != ob) {
        const unsigned t = s ^ bit(e.a) ^ bit(e.b);
        h.matrix(t, s) += e.j;
      }
    }
  }
  return h;
}

HamiltonianMatrix realize(const ChainSpec& spec, Basis basis) {
  return realize(site_graph(spec), basis);
}

HamiltonianMatrix realize(const LatticeSpec& spec, Basis basis) {
  HamiltonianMatrix h = realize(site_graph(spec), basis);
  if (basis == Basis::SingleExcitation) {
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        h.labels[static_cast<size_t>(r * spec.cols + c + 1)] =
            "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
      }
    }
  }
  return h;
}

Eigen::VectorXd chain_eigenvalues(const ChainSpec& spec) {
  validate(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      single_excitation_block<double>(spec), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ChainSpec apply_gauge(const ChainSpec& spec, const std::vector<int>& signs) {
  validate(spec);
  if (static_cast<int>(signs.size()) != spec.n_sites) {
    throw Error(ErrorKind::InvalidSize, "gauge needs one sign per site");
  }
  ChainSpec out = spec;
  for (int k = 0; k + 1 < spec.n_sites; ++k) {
    out.couplings(k) *= double(signs[k] * signs[k + 1]);
  }
  out.meta.kind = ChainKind::Custom;
  return out;
}

ChainSpec with_offset(const ChainSpec& spec, double offset) {
  ChainSpec out = spec;
  out.frequencies.array() += offset;
  out.meta.kind = ChainKind::Custom;
  return out;
}

bool operator==(const ChainSpec& a, const ChainSpec& b) {
  return a.n_sites == b.n_sites && a.frequencies == b.frequencies &&
         a.couplings == b.couplings && a.meta.kind == b.meta.kind &&
         a.meta.m == b.meta.m && a.meta.j == b.meta.j &&
         a.meta.theta == b.meta.theta;
}

}  // namespace zigzag
