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

#include <random>
#include <vector>

#include "ptnm/operators.hpp"
#include "ptnm/tensorops.hpp"

namespace ptnm {

/// Kraus form of a channel on system (x) environment. Every operator is
/// (d*D) x (d*D) with the system index slow.
struct KrausChannel {
  std::vector<CMatrix> ops;
  int d = 2;
  int env_dim = 1;

  /// Throws InvariantError unless sum_s A_s^dagger A_s = I within tol.
  void validate(double tol = 1e-9) const;
};

/// Index names of the 8-index channel tensor, in storage order.
namespace wlabel {
inline const std::string in = "i";
inline const std::string in_p = "i'";
inline const std::string out = "o";
inline const std::string out_p = "o'";
inline const std::string env_in = "alpha";
inline const std::string env_in_p = "alpha'";
inline const std::string env_out = "beta";
inline const std::string env_out_p = "beta'";
}  // namespace wlabel

/// W(i, i', o, o', alpha, alpha', beta, beta') =
///   sum_s A_s(o beta, i alpha) conj(A_s(o' beta', i' alpha')).
///
/// Stored row-major in exactly that label order, so the entries for one
/// physical tuple (i, i', o, o') form a contiguous D^2 x D^2 block indexed
/// by ((alpha alpha'), (beta beta')).
class ChannelTensor {
 public:
  ChannelTensor() = default;
  /// Wraps an existing tensor; labels must be the wlabel set in order.
  explicit ChannelTensor(LabeledTensor w);

  static ChannelTensor from_superoperator(const CMatrix& s, int d, int env_dim);

  int d() const { return d_; }
  int env_dim() const { return env_dim_; }
  const LabeledTensor& w() const { return w_; }

  /// Superoperator S((o beta)(o' beta'), (i alpha)(i' alpha')) on the
  /// composite space, row-major vectorization.
  CMatrix superoperator() const;

  /// Block for physical indices (i, i', o, o'): rows (alpha alpha'),
  /// columns (beta beta').
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
  block(int i, int ip, int o, int op) const;

  /// Applies the channel to a system-environment operator.
  CMatrix apply(const CMatrix& rho) const;

 private:
  LabeledTensor w_;
  int d_ = 0;
  int env_dim_ = 0;
};

struct JumpOperator {
  CMatrix op;
  double rate = 0.0;
};

/// Generator -i[H, .] + sum_k rate_k (2 L rho L^dagger - {L^dagger L, rho}).
struct LindbladSpec {
  CMatrix hamiltonian;
  std::vector<JumpOperator> jumps;

  void validate(double tol = 1e-10) const;
};

ChannelTensor kraus_to_w(const KrausChannel& ch);

CMatrix kraus_to_superoperator(const std::vector<CMatrix>& ops);

/// Vectorized generator (row-major convention), (dD)^2 x (dD)^2.
CMatrix lindblad_superoperator(const LindbladSpec& spec);

/// Kraus operators from the Choi eigendecomposition of a superoperator.
/// Choi eigenvalues below `drop_tol` are discarded; eigenvalues below
/// -cp_tol or a trace-preservation residual above cp_tol throw.
KrausChannel superop_to_kraus(const CMatrix& s, int d, int env_dim,
                              double cp_tol = 1e-9, double drop_tol = 1e-12);

struct CptpDiagnostic {
  /// Trace norm of (sum_{o,beta} W(i,i',o,o,alpha,alpha',beta,beta) - delta).
  double tp_residual = 0.0;
  double cp_min_eigenvalue = 0.0;
  bool pass = false;
};

CptpDiagnostic check_cptp(const ChannelTensor& ch, double tol = 1e-9);

/// Matrix of the trace-preservation map: T((i alpha), (i' alpha')) =
/// sum_{o, beta} W(i, i', o, o, alpha, alpha', beta, beta). Identity for
/// a trace-preserving channel.
CMatrix trace_preservation_matrix(const ChannelTensor& ch);

/// Choi matrix of the channel over (o beta i alpha) x (o' beta' i' alpha').
CMatrix channel_choi(const ChannelTensor& ch);

/// Random channel from a Haar-ish isometry (Gaussian matrix + QR) acting
/// as a Stinespring dilation with `rank` Kraus operators.
KrausChannel random_stinespring_channel(int d, int env_dim, int rank,
                                        std::mt19937_64& rng);

/// Gaussian-QR random unitary of size n.
CMatrix random_unitary(int n, std::mt19937_64& rng);

/// Random density matrix of size n with full rank.
CMatrix random_density_matrix(int n, std::mt19937_64& rng);

}  // namespace ptnm
