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

// Independent reference computations shared by the unit and acceptance
// tests. Everything here goes through dense LabeledTensor contractions
// and never touches the transfer-matrix code paths.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ptnm/channels.hpp"
#include "ptnm/process_tensor.hpp"
#include "ptnm/reconstruct.hpp"
#include "ptnm/tensorops.hpp"

namespace ptnm::oracle {

inline std::string env_label(int step, bool primed) {
  return "e" + std::to_string(step) + (primed ? "'" : "");
}

inline LabeledTensor site_tensor(const ProcessTensorMPDO& pt, int m) {
  return pt.site(m).w().relabeled({
      {wlabel::in, choi_label('i', m, false)},
      {wlabel::in_p, choi_label('i', m, true)},
      {wlabel::out, choi_label('o', m + 1, false)},
      {wlabel::out_p, choi_label('o', m + 1, true)},
      {wlabel::env_in, env_label(m, false)},
      {wlabel::env_in_p, env_label(m, true)},
      {wlabel::env_out, env_label(m + 1, false)},
      {wlabel::env_out_p, env_label(m + 1, true)},
  });
}

/// Superoperator as a tensor (in, in', out, out') mapping out -> in.
inline LabeledTensor operation_tensor(const CMatrix& lambda, int d, int m) {
  const auto du = static_cast<std::size_t>(d);
  return LabeledTensor::from_matrix(
      lambda, {choi_label('i', m, false), choi_label('i', m, true)}, {du, du},
      {choi_label('o', m, false), choi_label('o', m, true)}, {du, du});
}

/// Final system state from the dense process tensor and the operations.
inline CMatrix choi_apply(const ChoiTensor& choi, const std::vector<CMatrix>& ops) {
  LabeledTensor acc = choi.tensor;
  for (int m = 0; m < static_cast<int>(ops.size()); ++m) {
    acc = contract(acc, operation_tensor(ops[static_cast<std::size_t>(m)], choi.d, m),
                   {{choi_label('i', m, false), choi_label('i', m, false)},
                    {choi_label('i', m, true), choi_label('i', m, true)},
                    {choi_label('o', m, false), choi_label('o', m, false)},
                    {choi_label('o', m, true), choi_label('o', m, true)}});
  }
  return acc.matrix({choi_label('o', choi.k, false)});
}

/// Effective environment state after j steps by summing the full history
/// explicitly: every o_m = o_m' traced, every i_m = i_m' summed, normalized
/// to unit trace at the end.
inline CMatrix direct_env_state(const ProcessTensorMPDO& pt, int j) {
  const auto d = static_cast<std::size_t>(pt.d());
  LabeledTensor acc = pt.rho0_tensor().relabeled({
      {"o0", choi_label('o', 0, false)},
      {"o0'", choi_label('o', 0, true)},
      {"alpha0", env_label(0, false)},
      {"alpha0'", env_label(0, true)},
  });
  acc = contract(acc, LabeledTensor::delta(choi_label('o', 0, false),
                                           choi_label('o', 0, true), d),
                 {{choi_label('o', 0, false), choi_label('o', 0, false)},
                  {choi_label('o', 0, true), choi_label('o', 0, true)}});
  for (int m = 0; m < j; ++m) {
    LabeledTensor w = site_tensor(pt, m);
    w = contract(w, LabeledTensor::delta(choi_label('i', m, false),
                                         choi_label('i', m, true), d),
                 {{choi_label('i', m, false), choi_label('i', m, false)},
                  {choi_label('i', m, true), choi_label('i', m, true)}});
    w = contract(w, LabeledTensor::delta(choi_label('o', m + 1, false),
                                         choi_label('o', m + 1, true), d),
                 {{choi_label('o', m + 1, false), choi_label('o', m + 1, false)},
                  {choi_label('o', m + 1, true), choi_label('o', m + 1, true)}});
    acc = contract(acc, w, {{env_label(m, false), env_label(m, false)},
                            {env_label(m, true), env_label(m, true)}});
  }
  CMatrix rho = acc.matrix({env_label(j, false)});
  return rho / rho.trace();
}

/// Frobenius inner product of two materialized process tensors.
inline cplx dense_inner(const ChoiTensor& a, const ChoiTensor& b) {
  cplx s{};
  for (std::size_t n = 0; n < a.tensor.size(); ++n) {
    s += std::conj(a.tensor.data()[n]) * b.tensor.data()[n];
  }
  return s;
}

/// Labels on the left of the OSEE cut placed after output j.
inline std::vector<std::string> osee_left_labels(int j, bool include_input) {
  std::vector<std::string> left;
  for (int m = 0; m <= j; ++m) {
    left.push_back(choi_label('o', m, false));
    left.push_back(choi_label('o', m, true));
    if (m < j || include_input) {
      left.push_back(choi_label('i', m, false));
      left.push_back(choi_label('i', m, true));
    }
  }
  return left;
}

/// Half the bipartition entropy of the vectorized dense process tensor.
inline double dense_osee(const ChoiTensor& choi, int j, bool include_input = false) {
  const auto split = svd_split(choi.tensor, osee_left_labels(j, include_input));
  double norm = 0.0;
  for (double s : split.singular_values) norm += s * s;
  Spectrum spec;
  for (double s : split.singular_values) spec.values.push_back(s * s / norm);
  return 0.5 * von_neumann_entropy(spec);
}

/// Loss plus the trace-preservation penalty, evaluated from scratch.
inline double fit_objective(const ReconstructionAnsatz& a, const ProcessTensorMPDO& target,
                            int k, double penalty) {
  const int n = a.d * a.env_dim;
  CMatrix dev = -CMatrix::Identity(n, n);
  for (const auto& op : a.kraus_operators()) dev += op.adjoint() * op;
  return loss(a, target, k) + penalty * dev.squaredNorm();
}

/// Central differences over (re, im) of every a_bar entry, then of psi0.
inline std::vector<double> fd_gradient(ReconstructionAnsatz a, const ProcessTensorMPDO& target,
                                       int k, double penalty, double h = 1e-6) {
  std::vector<double> out;
  auto probe = [&](cplx& slot, cplx dir) {
    const cplx saved = slot;
    slot = saved + h * dir;
    const double up = fit_objective(a, target, k, penalty);
    slot = saved - h * dir;
    const double down = fit_objective(a, target, k, penalty);
    slot = saved;
    out.push_back((up - down) / (2.0 * h));
  };
  for (auto& z : a.a_bar) {
    probe(z, 1.0);
    probe(z, cplx(0.0, 1.0));
  }
  for (Eigen::Index n = 0; n < a.psi0.size(); ++n) {
    probe(a.psi0(n), 1.0);
    probe(a.psi0(n), cplx(0.0, 1.0));
  }
  return out;
}

/// The analytic gradient in the fd_gradient ordering.
inline std::vector<double> flatten(const LossGradient& g) {
  std::vector<double> out;
  for (std::size_t n = 0; n < g.d_re_a.size(); ++n) {
    out.push_back(g.d_re_a[n]);
    out.push_back(g.d_im_a[n]);
  }
  for (std::size_t n = 0; n < g.d_re_psi.size(); ++n) {
    out.push_back(g.d_re_psi[n]);
    out.push_back(g.d_im_psi[n]);
  }
  return out;
}

/// |a - b| / |b| in the Euclidean norm.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    diff += (a[n] - b[n]) * (a[n] - b[n]);
    scale += b[n] * b[n];
  }
  return std::sqrt(diff / scale);
}

}  // namespace ptnm::oracle
