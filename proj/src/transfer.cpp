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

#include "ptnm/detail/transfer.hpp"

namespace ptnm::detail {

SiteBlocks site_blocks(const ChannelTensor& ch) {
  const int d = ch.d();
  SiteBlocks out;
  out.reserve(static_cast<std::size_t>(d * d * d * d));
  for (int i = 0; i < d; ++i)
    for (int ip = 0; ip < d; ++ip)
      for (int o = 0; o < d; ++o)
        for (int op = 0; op < d; ++op) out.emplace_back(ch.block(i, ip, o, op));
  return out;
}

std::vector<CVector> rho0_blocks(const CMatrix& rho0, int d, int env_dim) {
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(d * d));
  for (int o = 0; o < d; ++o)
    for (int op = 0; op < d; ++op) {
      CVector v(env_dim * env_dim);
      for (int a = 0; a < env_dim; ++a)
        for (int ap = 0; ap < env_dim; ++ap)
          v(a * env_dim + ap) = rho0(o * env_dim + a, op * env_dim + ap);
      out.push_back(std::move(v));
    }
  return out;
}

CMatrix left_boundary(const std::vector<CVector>& a,
                      const std::vector<CVector>& b) {
  CMatrix env = CMatrix::Zero(a.front().size(), b.front().size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    env.noalias() += a[p].conjugate() * b[p].transpose();
  }
  return env;
}

CMatrix transfer_left(const CMatrix& env, const SiteBlocks& a,
                      const SiteBlocks& b) {
  CMatrix out = CMatrix::Zero(a.front().cols(), b.front().cols());
  CMatrix tmp;
  for (std::size_t p = 0; p < a.size(); ++p) {
    tmp.noalias() = env * b[p];
    out.noalias() += a[p].adjoint() * tmp;
  }
  return out;
}

CMatrix transfer_right(const CMatrix& env, const SiteBlocks& a,
                       const SiteBlocks& b) {
  CMatrix out = CMatrix::Zero(a.front().rows(), b.front().rows());
  CMatrix tmp;
  for (std::size_t p = 0; p < a.size(); ++p) {
    tmp.noalias() = env * b[p].transpose();
    out.noalias() += a[p].conjugate() * tmp;
  }
  return out;
}

CMatrix right_boundary(int env_a, int env_b) {
  CMatrix r = CMatrix::Zero(env_a * env_a, env_b * env_b);
  for (int x = 0; x < env_a; ++x)
    for (int y = 0; y < env_b; ++y) r(x * env_a + x, y * env_b + y) = 1.0;
  return r;
}

cplx close(const CMatrix& left, const CMatrix& right) {
  return left.cwiseProduct(right).sum();
}

PairEnvironments pair_environments(const ProcessTensorMPDO& a,
                                   const ProcessTensorMPDO& b) {
  if (a.d() != b.d() || a.k() != b.k()) {
    throw DimensionError("process tensors differ in system dimension or steps");
  }
  const int k = a.k();
  PairEnvironments envs;
  envs.rho0_a = rho0_blocks(a.rho0(), a.d(), a.env_dim());
  envs.rho0_b = rho0_blocks(b.rho0(), b.d(), b.env_dim());
  for (int m = 0; m < k; ++m) {
    envs.blocks_a.push_back(site_blocks(a.site(m)));
    envs.blocks_b.push_back(site_blocks(b.site(m)));
  }
  envs.left.resize(static_cast<std::size_t>(k + 1));
  envs.right.resize(static_cast<std::size_t>(k + 1));
  envs.left[0] = left_boundary(envs.rho0_a, envs.rho0_b);
  for (int m = 0; m < k; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    envs.left[mu + 1] = transfer_left(envs.left[mu], envs.blocks_a[mu],
                                      envs.blocks_b[mu]);
  }
  envs.right[static_cast<std::size_t>(k)] =
      right_boundary(a.env_dim(), b.env_dim());
  for (int m = k; m-- > 0;) {
    const auto mu = static_cast<std::size_t>(m);
    envs.right[mu] = transfer_right(envs.right[mu + 1], envs.blocks_a[mu],
                                    envs.blocks_b[mu]);
  }
  return envs;
}

}  // namespace ptnm::detail
