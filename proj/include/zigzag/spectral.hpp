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

#ifndef ZIGZAG_SPECTRAL_HPP
#define ZIGZAG_SPECTRAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "zigzag/chain_model.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/units.hpp"

namespace zigzag {

inline constexpr double kReconstructionTolerance = 1e-8;
inline constexpr double kSpacingTolerance = 1e-6 * kPi;
inline constexpr double kMirrorTolerance = 1e-9;

/// Ascending eigenvalues in units of J.
struct TargetSpectrum {
  Eigen::VectorXd values;
  int m = 0;
  int n = 0;
};

TargetSpectrum target_spectrum(int n, int m);

struct PstConditionReport {
  bool mirror_ok = false;
  double mirror_residual = 0.0;
  bool spacing_ok = false;
  std::vector<int> gap_integers;     ///< m_n with gap * tau = (2 m_n + 1) pi
  std::vector<double> gap_residuals; ///< |gap * tau - (2 m_n + 1) pi|
  double tau = 0.0;
};

PstConditionReport check_pst_conditions(const ChainSpec& spec, double tau,
                                        double spacing_tol = kSpacingTolerance,
                                        double mirror_tol = kMirrorTolerance);

/// Diagonal and off-diagonal of a Jacobi matrix.
template <typename Scalar>
struct Jacobi {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diagonal;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> offdiagonal;
};

/// Persymmetric Jacobi matrix with the given strictly ascending spectrum.
///
/// A persymmetric Jacobi matrix has first eigenvector components
/// w_k proportional to 1 / prod_{j != k} |l_k - l_j|. Lanczos on diag(l)
/// started from sqrt(w) then yields the matrix, with full
/// reorthogonalization. Off-diagonals come out positive.
template <typename Scalar>
Jacobi<Scalar> reconstruct_jacobi(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lambda) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::log;
  using std::exp;
  using std::sqrt;
  const Eigen::Index n = lambda.size();
  if (n < 1) throw Error(ErrorKind::InvalidSize, "empty spectrum");
  const Scalar scale = lambda.cwiseAbs().maxCoeff() + Scalar(1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Scalar gap = lambda(k + 1) - lambda(k);
    if (abs(gap) <= Scalar(1e-12) * scale) {
      throw Error(ErrorKind::DegenerateSpectrum,
                  "repeated eigenvalues admit no Jacobi matrix");
    }
    if (gap < Scalar(0)) {
      throw Error(ErrorKind::Precondition, "spectrum must be ascending");
    }
  }
  // Log-domain weights avoid overflow for wide spectra.
  Vec logw(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar s(0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != k) s -= log(abs(lambda(k) - lambda(j)));
    }
    logw(k) = s;
  }
  const Scalar top = logw.maxCoeff();
  Vec q(n);
  for (Eigen::Index k = 0; k < n; ++k) q(k) = exp(Scalar(0.5) * (logw(k) - top));
  q /= q.norm();

  Jacobi<Scalar> out;
  out.diagonal.resize(n);
  out.offdiagonal.resize(n > 0 ? n - 1 : 0);
  Mat basis = Mat::Zero(n, n);
  basis.col(0) = q;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vec qk = basis.col(k);
    Vec r = lambda.cwiseProduct(qk);
    out.diagonal(k) = qk.dot(r);
    if (k + 1 == n) break;
    // Two passes of classical Gram-Schmidt against all previous vectors.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j <= k; ++j) {
        r -= basis.col(j).dot(r) * basis.col(j);
      }
    }
    const Scalar beta = r.norm();
    out.offdiagonal(k) = beta;
    basis.col(k + 1) = r / beta;
  }
  return out;
}

/// IEP solution for a target spectrum, scaled by the base coupling j.
ChainSpec reconstruct_tridiagonal(const TargetSpectrum& spectrum, double j = 1.0);
ChainSpec reconstruct_tridiagonal(const Eigen::VectorXd& values, double j = 1.0);

/// V (involution), R (mirror), Q = V R V.
template <typename Scalar>
struct FstTransformT {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> V;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> R;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> Q;
  Scalar theta;
};
using FstTransform = FstTransformT<double>;

template <typename Scalar>
FstTransformT<Scalar> fst_transform(int n, Scalar theta) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::cos;
  using std::sin;
  if (n < 2) throw Error(ErrorKind::InvalidSize, "FST transform needs N >= 2");
  const Scalar s = sin(theta), c = cos(theta);
  FstTransformT<Scalar> t;
  t.theta = theta;
  t.V = Mat::Zero(n, n);
  t.R = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) t.R(k, n - 1 - k) = Scalar(1);
  const int half = n / 2;
  for (int k = 0; k < half; ++k) {
    t.V(k, k) = s;
    t.V(n - 1 - k, n - 1 - k) = -s;
    t.V(k, n - 1 - k) = c;
    t.V(n - 1 - k, k) = c;
  }
  if (n % 2 == 1) t.V(half, half) = Scalar(1);
  t.Q = t.V * t.R * t.V;
  return t;
}

/// tau = pi / J for angular J (rad/ns); equivalently 1 / (2 f_J).
double transfer_time(double j);

}  // namespace zigzag

#endif  // ZIGZAG_SPECTRAL_HPP
