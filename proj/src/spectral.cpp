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

#include "zigzag/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace zigzag {

TargetSpectrum target_spectrum(int n, int m) {
  if (n % 2 == 0) {
    throw Error(ErrorKind::UnsupportedParity, "target spectrum needs odd N");
  }
  if (n < 3) throw Error(ErrorKind::InvalidSize, "target spectrum needs N >= 3");
  if (m < 0) throw Error(ErrorKind::Precondition, "m must be non-negative");
  const int h = (n - 1) / 2;
  TargetSpectrum t;
  t.n = n;
  t.m = m;
  t.values.resize(n);
  int i = 0;
  for (int k = -h; k <= 0; ++k) t.values(i++) = k;
  for (int k = 1; k <= h; ++k) t.values(i++) = 2 * m + k;
  return t;
}

ChainSpec reconstruct_tridiagonal(const Eigen::VectorXd& values, double j) {
  const Jacobi<double> jac = reconstruct_jacobi<double>(values);
  ChainSpec spec;
  spec.n_sites = static_cast<int>(values.size());
  spec.frequencies = j * jac.diagonal;
  spec.couplings = j * jac.offdiagonal;
  spec.meta = {ChainKind::Custom, 0, j, 0.0};
  return spec;
}

ChainSpec reconstruct_tridiagonal(const TargetSpectrum& spectrum, double j) {
  ChainSpec spec = reconstruct_tridiagonal(spectrum.values, j);
  spec.meta.m = spectrum.m;
  return spec;
}

PstConditionReport check_pst_conditions(const ChainSpec& spec, double tau,
                                        double spacing_tol, double mirror_tol) {
  validate(spec);
  PstConditionReport rep;
  rep.tau = tau;
  const double scale =
      std::max({1e-300, spec.frequencies.cwiseAbs().maxCoeff(),
                spec.couplings.size() ? spec.couplings.cwiseAbs().maxCoeff() : 0.0});
  rep.mirror_residual = mirror_residual(spec);
  rep.mirror_ok = rep.mirror_residual <= mirror_tol * scale;

  const Eigen::VectorXd lam = chain_eigenvalues(spec);
  rep.spacing_ok = true;
  for (Eigen::Index k = 0; k + 1 < lam.size(); ++k) {
    const double phase = (lam(k + 1) - lam(k)) * tau;
    const int mk = static_cast<int>(std::lround((phase / kPi - 1.0) / 2.0));
    const double res = std::abs(phase - (2.0 * mk + 1.0) * kPi);
    rep.gap_integers.push_back(mk);
    rep.gap_residuals.push_back(res);
    if (!(res <= spacing_tol) || mk < 0) rep.spacing_ok = false;
  }
  return rep;
}

double transfer_time(double j) {
  if (!(j > 0.0)) throw Error(ErrorKind::Precondition, "J must be positive");
  return kPi / j;
}

}  // namespace zigzag
