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

#include <vector>

#include "ptnm/process_tensor.hpp"

// Transfer-matrix contractions shared by inner products, the OSEE Gram
// construction and loss gradients. A "pair environment" is a matrix over
// (alpha_a alpha_a') x (alpha_b alpha_b') bonds of two process tensors.

namespace ptnm::detail {

/// D^2 x D^2 blocks of a channel tensor, indexed p = ((i d + i') d + o) d + o'.
using SiteBlocks = std::vector<CMatrix>;

SiteBlocks site_blocks(const ChannelTensor& ch);

/// Initial state blocks: for p = o d + o', a column vector over (alpha alpha').
std::vector<CVector> rho0_blocks(const CMatrix& rho0, int d, int env_dim);

CMatrix left_boundary(const std::vector<CVector>& a,
                      const std::vector<CVector>& b);

/// E' = sum_p A_p^dagger E B_p.
CMatrix transfer_left(const CMatrix& env, const SiteBlocks& a,
                      const SiteBlocks& b);

/// R' = sum_p conj(A_p) R B_p^T.
CMatrix transfer_right(const CMatrix& env, const SiteBlocks& a,
                       const SiteBlocks& b);

/// Final trace over beta = beta' on both layers.
CMatrix right_boundary(int env_a, int env_b);

/// sum over matched entries of two environments at the same cut.
cplx close(const CMatrix& left, const CMatrix& right);

struct PairEnvironments {
  /// left[m]: contraction of rho0 and sites 0..m-1 (m = 0..k).
  std::vector<CMatrix> left;
  /// right[m]: contraction of sites m..k-1 and the final trace (m = 0..k);
  /// right[k] is the bare boundary.
  std::vector<CMatrix> right;
  std::vector<SiteBlocks> blocks_a;
  std::vector<SiteBlocks> blocks_b;
  std::vector<CVector> rho0_a;
  std::vector<CVector> rho0_b;
};

PairEnvironments pair_environments(const ProcessTensorMPDO& a,
                                   const ProcessTensorMPDO& b);

}  // namespace ptnm::detail
