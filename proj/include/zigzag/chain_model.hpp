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

#ifndef ZIGZAG_CHAIN_MODEL_HPP
#define ZIGZAG_CHAIN_MODEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace zigzag {

enum class ChainKind { Line, Zigzag, Fst, Effective, Custom };

const char* chain_kind_name(ChainKind kind);
ChainKind parse_chain_kind(const std::string& name);

/// Construction record attached to a chain.
struct ChainMeta {
  ChainKind kind = ChainKind::Custom;
  int m = 0;
  double j = 0.0;      ///< base coupling, rad/ns
  double theta = 0.0;  ///< FST angle, rad
};

/// 1D XY chain. Frequencies and couplings are angular (rad/ns).
struct ChainSpec {
  int n_sites = 0;
  Eigen::VectorXd frequencies;
  Eigen::VectorXd couplings;
  ChainMeta meta;
};

/// 2D grid as a Kronecker sum of two chains.
/// Site (r, c) (0-based) has linear index r * cols + c.
struct LatticeSpec {
  int rows = 0;
  int cols = 0;
  ChainSpec row_chain;  ///< length cols, x-direction
  ChainSpec col_chain;  ///< length rows, y-direction
};

/// Flat site graph shared by chains and lattices.
struct SiteGraph {
  struct Edge {
    int a;
    int b;
    double j;
  };
  Eigen::VectorXd onsite;
  std::vector<Edge> edges;
  int size() const { return static_cast<int>(onsite.size()); }
};

enum class Basis { SingleExcitation, Full };

inline constexpr int kMaxFullSpaceSites = 12;

/// Dense Hermitian matrix on an explicit basis.
///
/// SingleExcitation: index 0 is the vacuum, index k is site k (1-based).
/// Full: index is the bit string of occupations, site 1 most significant.
struct HamiltonianMatrix {
  Basis basis = Basis::SingleExcitation;
  int n_sites = 0;
  Eigen::MatrixXcd matrix;
  std::vector<std::string> labels;
};

int basis_dimension(Basis basis, int n_sites);

// Builders.
ChainSpec build_line(int n, double j);
ChainSpec build_zigzag(int n, int m, double j);
ChainSpec apply_fst_deformation(const ChainSpec& spec, double theta);
ChainSpec build_effective_limit(int n, double j);
LatticeSpec build_lattice(int rows, int cols, int m, double j,
                          std::optional<double> theta = std::nullopt);

/// Largest |ω_n − ω_{N+1−n}| and ||J_n| − |J_{N−n}|| over the chain.
double mirror_residual(const ChainSpec& spec);

/// Throws Error(Invariant) if sizes disagree or parameters are not finite.
void validate(const ChainSpec& spec);

SiteGraph site_graph(const ChainSpec& spec);
SiteGraph site_graph(const LatticeSpec& spec);

HamiltonianMatrix realize(const SiteGraph& graph, Basis basis);
HamiltonianMatrix realize(const ChainSpec& spec,
                          Basis basis = Basis::SingleExcitation);
HamiltonianMatrix realize(const LatticeSpec& spec,
                          Basis basis = Basis::SingleExcitation);

/// Single-excitation block (sites only, no vacuum) as a real tridiagonal
/// matrix in the requested scalar.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> single_excitation_block(
    const ChainSpec& spec) {
  const int n = spec.n_sites;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = Scalar(spec.frequencies(k));
  for (int k = 0; k + 1 < n; ++k) {
    h(k, k + 1) = Scalar(spec.couplings(k));
    h(k + 1, k) = Scalar(spec.couplings(k));
  }
  return h;
}

/// Ascending eigenvalues of the single-excitation block.
Eigen::VectorXd chain_eigenvalues(const ChainSpec& spec);

/// Gauge transform diag(s) H diag(s) with s_k = ±1; flips the sign of
/// every coupling whose endpoints carry opposite signs.
ChainSpec apply_gauge(const ChainSpec& spec, const std::vector<int>& signs);

/// Adds a constant to every frequency.
ChainSpec with_offset(const ChainSpec& spec, double offset);

/// Deep equality of parameter vectors and metadata.
bool operator==(const ChainSpec& a, const ChainSpec& b);

}  // namespace zigzag

#endif  // ZIGZAG_CHAIN_MODEL_HPP
