// Copyright 2026 The ptnm Authors
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

#include "ptnm/operators.hpp"

#include <cmath>

namespace ptnm {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vectorize(const CMatrix& rho) {
  const auto n = rho.rows();
  CVector v(n * rho.cols());
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < rho.cols(); ++b) v(a * rho.cols() + b) = rho(a, b);
  }
  return v;
}

CMatrix unvectorize(const CVector& v, Eigen::Index n) {
  if (v.size() != n * n) throw DimensionError("unvectorize: size mismatch");
  CMatrix rho(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) rho(a, b) = v(a * n + b);
  }
  return rho;
}

CMatrix apply_superoperator(const CMatrix& s, const CMatrix& rho) {
  if (rho.rows() != rho.cols() || s.cols() != rho.size() || s.rows() != s.cols()) {
    throw DimensionError("superoperator does not match operator dimension");
  }
  return unvectorize(s * vectorize(rho), rho.rows());
}

CMatrix unitary_superoperator(const CMatrix& u) {
  return kron(u, u.conjugate());
}

CMatrix choi_from_superoperator(const CMatrix& s) {
  const auto n2 = s.rows();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n2))));
  if (n * n != n2 || s.cols() != n2) {
    throw DimensionError("superoperator must be n^2 x n^2");
  }
  CMatrix c(n2, n2);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index cc = 0; cc < n; ++cc)
        for (Eigen::Index d = 0; d < n; ++d)
          c(a * n + cc, b * n + d) = s(a * n + b, cc * n + d);
  return c;
}

CMatrix superoperator_from_choi(const CMatrix& c) {
  // The reshuffle is an involution.
  return choi_from_superoperator(c);
}

CMatrix partial_trace_env(const CMatrix& rho, int d, int env_dim) {
  if (rho.rows() != d * env_dim || rho.cols() != d * env_dim) {
    throw DimensionError("partial_trace_env: operator is not (dD x dD)");
  }
  CMatrix out = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int e = 0; e < env_dim; ++e)
        out(a, b) += rho(a * env_dim + e, b * env_dim + e);
  return out;
}

CMatrix partial_trace_sys(const CMatrix& rho, int d, int env_dim) {
  if (rho.rows() != d * env_dim || rho.cols() != d * env_dim) {
    throw DimensionError("partial_trace_sys: operator is not (dD x dD)");
  }
  CMatrix out = CMatrix::Zero(env_dim, env_dim);
  for (int s = 0; s < d; ++s)
    out += rho.block(s * env_dim, s * env_dim, env_dim, env_dim);
  return out;
}

CMatrix apply_system_map(const CMatrix& lambda, const CMatrix& rho, int d,
                         int env_dim) {
  if (lambda.rows() != d * d || lambda.cols() != d * d) {
    throw DimensionError("system map must be d^2 x d^2");
  }
  if (rho.rows() != d * env_dim || rho.cols() != d * env_dim) {
    throw DimensionError("apply_system_map: operator is not (dD x dD)");
  }
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          const cplx l = lambda(a * d + b, c * d + e);
          if (l == cplx{0.0, 0.0}) continue;
          out.block(a * env_dim, b * env_dim, env_dim, env_dim) +=
              l * rho.block(c * env_dim, e * env_dim, env_dim, env_dim);
        }
  return out;
}

namespace pauli {
CMatrix identity() { return CMatrix::Identity(2, 2); }
CMatrix x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
CMatrix z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
CMatrix lower() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}
CMatrix raise() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}
}  // namespace pauli

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

}  // namespace ptnm
