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

#pragma once

#include "ptnm/types.hpp"

namespace ptnm {

// Vectorization convention (used by every superoperator in this library):
// row-major stacking, vec(rho)[a * n + b] = rho(a, b). With this convention
// vec(A rho B) = kron(A, B^T) vec(rho).
//
// Composite system-environment indices put the system first:
// (s, e) -> s * D + e.

CMatrix kron(const CMatrix& a, const CMatrix& b);

CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, Eigen::Index n);

/// rho'(ab) = sum_cd S(ab, cd) rho(cd).
CMatrix apply_superoperator(const CMatrix& s, const CMatrix& rho);

/// Superoperator of rho -> u rho u^dagger.
CMatrix unitary_superoperator(const CMatrix& u);

/// Choi matrix C((a c), (b d)) = S((a b), (c d)); PSD iff S is CP.
CMatrix choi_from_superoperator(const CMatrix& s);
CMatrix superoperator_from_choi(const CMatrix& c);

/// tr_E over a (d*D x d*D) operator.
CMatrix partial_trace_env(const CMatrix& rho, int d, int env_dim);
/// tr_S over a (d*D x d*D) operator.
CMatrix partial_trace_sys(const CMatrix& rho, int d, int env_dim);

/// Lifts a system superoperator (d^2 x d^2) to act as lambda (x) id_E on
/// a system-environment operator.
CMatrix apply_system_map(const CMatrix& lambda, const CMatrix& rho, int d,
                         int env_dim);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
/// |0><1|: lowers |1> to |0>.
CMatrix lower();
/// |1><0|
CMatrix raise();
}  // namespace pauli

bool is_hermitian(const CMatrix& m, double tol);
bool is_unitary(const CMatrix& u, double tol);

}  // namespace ptnm
