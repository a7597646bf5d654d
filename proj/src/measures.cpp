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

#include "ptnm/measures.hpp"

#include <algorithm>
#include <cmath>

#include "ptnm/detail/transfer.hpp"

namespace ptnm {

EnvState env_state(const ProcessTensorMPDO& pt, int j,
                   const EnvStateOptions& opts) {
  if (j < 0 || j > pt.k()) throw std::out_of_range("env_state: j out of range");
  auto rec = effective_environment(pt, j);
  if (rec.max_trace_deviation > opts.trace_tol) {
    throw InvariantError(
        "environment trace deviates from its expected value by " +
        std::to_string(rec.max_trace_deviation) +
        "; the process tensor is not normalized");
  }
  CMatrix rho = 0.5 * (rec.rho + rec.rho.adjoint());
  return EnvState{std::move(rho), j};
}

double nm_ee(const ProcessTensorMPDO& pt, int j, const EnvStateOptions& opts) {
  if (j < 1 || j > pt.k()) throw std::out_of_range("nm_ee: j out of range");
  const auto state = env_state(pt, j, opts);
  return von_neumann_entropy(density_spectrum(state.rho, 1e-9), 1e-9);
}

//------------------------------------------------------------------------------
// OSEE
//------------------------------------------------------------------------------

namespace {

Spectrum osee_spectrum_from(const ProcessTensorMPDO& pt,
                            const detail::PairEnvironments& envs, int j,
                            const OseeOptions& opts) {
  const int k = pt.k();
  CMatrix gl, gr;
  if (opts.cut == OseeCut::kAfterOutput) {
    if (j < 1 || j >= k) throw std::out_of_range("osee: j must lie in [1, k)");
    gl = envs.left[static_cast<std::size_t>(j)];
    gr = envs.right[static_cast<std::size_t>(j)];
  } else {
    if (j < 0 || j >= k) throw std::out_of_range("osee: j must lie in [0, k)");
    const int d = pt.d();
    const int d2 = d * d;
    const auto& blocks = envs.blocks_a[static_cast<std::size_t>(j)];
    const CMatrix& right = envs.right[static_cast<std::size_t>(j + 1)];
    const auto bond = blocks.front().rows();
    gl = kron(envs.left[static_cast<std::size_t>(j)],
              CMatrix::Identity(d2, d2));
    gr = CMatrix::Zero(bond * d2, bond * d2);
    for (int q = 0; q < d2; ++q)
      for (int qp = 0; qp < d2; ++qp) {
        CMatrix acc = CMatrix::Zero(bond, bond);
        for (int oo = 0; oo < d2; ++oo) {
          const auto& wq = blocks[static_cast<std::size_t>(q * d2 + oo)];
          const auto& wqp = blocks[static_cast<std::size_t>(qp * d2 + oo)];
          acc.noalias() += wq.conjugate() * right * wqp.transpose();
        }
        // Bond ordering x = b * d^2 + q.
        for (Eigen::Index b = 0; b < bond; ++b)
          for (Eigen::Index bp = 0; bp < bond; ++bp)
            gr(b * d2 + q, bp * d2 + qp) = acc(b, bp);
      }
  }
  // Nonzero spectrum of the reduced state equals that of
  // sqrt(GL) GR^T sqrt(GL).
  const CMatrix gl_sqrt = psd_sqrt(0.5 * (gl + gl.adjoint()));
  const CMatrix grt = gr.transpose();
  CMatrix m = gl_sqrt * (0.5 * (grt + grt.adjoint())) * gl_sqrt;
  m = 0.5 * (m + m.adjoint());
  const double norm = m.trace().real();
  if (!(norm > 0.0)) throw InvariantError("vectorized process tensor has zero norm");
  auto eig = eig_hermitian(m / norm, 1e-8);
  for (auto& v : eig.spectrum.values) v = std::max(v, 0.0);
  return eig.spectrum;
}

double half_entropy(const Spectrum& spectrum, const OseeOptions& opts) {
  const double s = opts.renyi_alpha ? renyi_entropy(spectrum, *opts.renyi_alpha)
                                    : von_neumann_entropy(spectrum);
  return 0.5 * s;
}

}  // namespace

Spectrum osee_spectrum(const ProcessTensorMPDO& pt, int j,
                       const OseeOptions& opts) {
  return osee_spectrum_from(pt, detail::pair_environments(pt, pt), j, opts);
}

double osee(const ProcessTensorMPDO& pt, int j, const OseeOptions& opts) {
  return half_entropy(osee_spectrum(pt, j, opts), opts);
}

//------------------------------------------------------------------------------
// memory complexity
//------------------------------------------------------------------------------

double memory_complexity(const UnitaryModel& model, int j) {
  const int d = model.d;
  const int env = model.env_dim;
  const int n = d * env;
  if (model.unitary.rows() != n || model.rho0.rows() != n) {
    throw DimensionError("unitary model dimensions do not match (d, D)");
  }
  if (!is_unitary(model.unitary, 1e-9)) {
    throw InvariantError("memory_complexity needs a unitary channel");
  }
  if (j < 0) throw std::out_of_range("memory_complexity: j must be >= 0");
  CMatrix rho = partial_trace_sys(model.rho0, d, env);
  for (int step = 0; step < j; ++step) {
    CMatrix next = CMatrix::Zero(env, env);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const CMatrix kab = model.unitary.block(a * env, b * env, env, env);
        next.noalias() += kab * rho * kab.adjoint();
      }
    rho = next / static_cast<double>(d);
  }
  rho = 0.5 * (rho + rho.adjoint());
  return von_neumann_entropy(density_spectrum(rho, 1e-9), 1e-9);
}

//------------------------------------------------------------------------------
// series
//------------------------------------------------------------------------------

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kOsee:
      return "osee";
    case MeasureKind::kEe:
      return "ee";
    case MeasureKind::kMemoryComplexity:
      return "memory_complexity";
  }
  return "unknown";
}

MeasureSeries measure_series(const ProcessTensorMPDO& pt, MeasureKind kind,
                             const SeriesOptions& opts) {
  if (pt.k() < 2) throw std::invalid_argument("measure_series needs k >= 2");
  MeasureSeries series;
  series.kind = kind;
  const int k = pt.k();
  const int margin = opts.boundary_margin.value_or(k / 5);
  switch (kind) {
    case MeasureKind::kOsee: {
      // One environment sweep serves every cut.
      const auto envs = detail::pair_environments(pt, pt);
      for (int j = 1; j < k; ++j) {
        series.steps.push_back(j);
        series.values.push_back(
            half_entropy(osee_spectrum_from(pt, envs, j, opts.osee), opts.osee));
        series.boundary_flagged.push_back(j > k - margin);
      }
      break;
    }
    case MeasureKind::kEe: {
      for (int j = 1; j <= k; ++j) {
        series.steps.push_back(j);
        series.values.push_back(nm_ee(pt, j, opts.env));
        series.boundary_flagged.push_back(false);
      }
      break;
    }
    case MeasureKind::kMemoryComplexity:
      throw std::invalid_argument(
          "memory complexity series need a unitary model, not a process tensor");
  }
  return series;
}

}  // namespace ptnm
