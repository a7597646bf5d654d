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

#include <optional>
#include <string>
#include <vector>

#include "ptnm/channels.hpp"
#include "ptnm/tensorops.hpp"

namespace ptnm {

/// k-step process tensor in matrix-product form: the initial
/// system-environment state followed by one channel tensor per step.
/// The final environment index is traced.
class ProcessTensorMPDO {
 public:
  ProcessTensorMPDO() = default;

  /// Time-independent model: every site equals `channel`. Validates that
  /// rho0 is a density matrix and that the channel is trace preserving.
  static ProcessTensorMPDO build(const ChannelTensor& channel,
                                 const CMatrix& rho0, int k);

  /// Assembles a process tensor without checking normalization; used for
  /// variational predictions that only approximately satisfy it.
  static ProcessTensorMPDO from_parts(CMatrix rho0,
                                      std::vector<ChannelTensor> sites);

  int d() const { return d_; }
  int env_dim() const { return env_dim_; }
  int k() const { return static_cast<int>(sites_.size()); }

  /// rho0 as a (dD x dD) matrix, composite index o * D + alpha.
  const CMatrix& rho0() const { return rho0_; }
  /// rho0 as a tensor with labels (o0, o0', alpha0, alpha0').
  LabeledTensor rho0_tensor() const;

  const std::vector<ChannelTensor>& sites() const { return sites_; }
  const ChannelTensor& site(int m) const { return sites_.at(static_cast<std::size_t>(m)); }
  /// Cached superoperator of site m.
  const CMatrix& site_superoperator(int m) const {
    return superops_.at(static_cast<std::size_t>(m));
  }

  /// The process tensor restricted to its first j steps.
  ProcessTensorMPDO prefix(int j) const;

 private:
  CMatrix rho0_;
  std::vector<ChannelTensor> sites_;
  std::vector<CMatrix> superops_;
  int d_ = 0;
  int env_dim_ = 0;
};

/// Intervention maps are d^2 x d^2 superoperators in the library's
/// row-major convention.
namespace intervention {
CMatrix identity(int d);
CMatrix unitary(const CMatrix& u);
/// rho -> tr(M rho) P.
CMatrix measure_prepare(const CMatrix& measurement, const CMatrix& preparation);
}  // namespace intervention

struct OperationSequence {
  std::vector<CMatrix> ops;
  std::optional<CMatrix> final_measurement;

  /// Throws unless every op is a CP d^2 x d^2 map (tol on Choi eigenvalues).
  void validate(int d, double tol = 1e-9) const;
};

/// Output system state after interleaving the sequence with the dynamics.
CMatrix apply(const ProcessTensorMPDO& pt, const OperationSequence& seq);

/// tr(M_j rho_j) for a sequence of j <= k operations plus final measurement.
double expectation(const ProcessTensorMPDO& pt, const OperationSequence& seq);

/// Environment state after step j under identity-averaged history
/// (recursion rho_j = tr_S E(I (x) rho_{j-1}) / d). The second member is
/// the largest deviation of a pre-normalization trace from one.
struct EnvRecursion {
  CMatrix rho;
  double max_trace_deviation = 0.0;
};
EnvRecursion effective_environment(const ProcessTensorMPDO& pt, int j);

/// Local expectation of M at step j with all past operations averaged:
/// tr(M E_j(I (x) rho^E_{j-1})). With M = I this returns d.
double local_expectation_averaged(const ProcessTensorMPDO& pt,
                                  const CMatrix& measurement, int j);

/// tr(M E^j rho0): no intervention before step j.
double expectation_do_nothing(const ProcessTensorMPDO& pt,
                              const CMatrix& measurement, int j);

inline constexpr int kMaxMaterializeSteps = 4;

/// Dense process tensor with labels (o0, o0', i0, i0', ..., o_k, o_k').
struct ChoiTensor {
  LabeledTensor tensor;
  int d = 0;
  int k = 0;

  /// Rows over the unprimed labels, columns over the primed ones.
  CMatrix matrix() const;
};

std::string choi_label(char kind, int step, bool primed);

ChoiTensor materialize(const ProcessTensorMPDO& pt,
                       int max_k = kMaxMaterializeSteps);

struct ContainmentReport {
  double residual = 0.0;
  bool pass = false;
};

/// tr_{o_k} Upsilon_k == delta(i_{k-1}, i_{k-1}') (x) Upsilon_{k-1}.
ContainmentReport check_containment(const ProcessTensorMPDO& pt,
                                    double tol = 1e-9,
                                    int max_k = kMaxMaterializeSteps);

/// Frobenius inner product sum conj(a) b over every physical index,
/// computed by transfer contraction.
cplx inner_product(const ProcessTensorMPDO& a, const ProcessTensorMPDO& b);

/// Conjugates every environment index by the unitary u.
ProcessTensorMPDO gauge_transform_env(const ProcessTensorMPDO& pt,
                                      const CMatrix& u);

}  // namespace ptnm
