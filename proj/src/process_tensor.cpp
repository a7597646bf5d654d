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

#include "ptnm/process_tensor.hpp"

#include <algorithm>
#include <cmath>

#include "ptnm/detail/transfer.hpp"

namespace ptnm {

namespace {

void check_density_matrix(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) throw DimensionError("rho0 must be square");
  if (!is_hermitian(rho, tol)) throw InvariantError("rho0 is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > tol) {
    throw InvariantError("rho0 does not have unit trace");
  }
  const auto eig = eig_hermitian(rho, tol);
  if (eig.spectrum.values.back() < -tol) {
    throw InvariantError("rho0 is not positive semidefinite");
  }
}

}  // namespace

//------------------------------------------------------------------------------
// ProcessTensorMPDO
//------------------------------------------------------------------------------

ProcessTensorMPDO ProcessTensorMPDO::build(const ChannelTensor& channel,
                                           const CMatrix& rho0, int k) {
  if (k < 1) throw std::invalid_argument("process tensor needs k >= 1");
  const int n = channel.d() * channel.env_dim();
  if (rho0.rows() != n || rho0.cols() != n) {
    throw DimensionError("rho0 does not match the channel's (d, D)");
  }
  check_density_matrix(rho0, 1e-9);
  const auto diag = check_cptp(channel, 1e-9);
  if (diag.tp_residual >= 1e-9) {
    throw InvariantError("channel violates trace preservation (residual " +
                         std::to_string(diag.tp_residual) + ")");
  }
  return from_parts(rho0, std::vector<ChannelTensor>(static_cast<std::size_t>(k),
                                                     channel));
}

ProcessTensorMPDO ProcessTensorMPDO::from_parts(
    CMatrix rho0, std::vector<ChannelTensor> sites) {
  if (sites.empty()) throw std::invalid_argument("process tensor needs k >= 1");
  ProcessTensorMPDO pt;
  pt.d_ = sites.front().d();
  pt.env_dim_ = sites.front().env_dim();
  for (const auto& s : sites) {
    if (s.d() != pt.d_ || s.env_dim() != pt.env_dim_) {
      throw DimensionError("site tensors disagree on (d, D)");
    }
  }
  if (rho0.rows() != pt.d_ * pt.env_dim_ || rho0.cols() != rho0.rows()) {
    throw DimensionError("rho0 does not match the sites' (d, D)");
  }
  pt.rho0_ = std::move(rho0);
  pt.sites_ = std::move(sites);
  pt.superops_.reserve(pt.sites_.size());
  for (const auto& s : pt.sites_) pt.superops_.push_back(s.superoperator());
  return pt;
}

LabeledTensor ProcessTensorMPDO::rho0_tensor() const {
  const auto d = static_cast<std::size_t>(d_);
  const auto e = static_cast<std::size_t>(env_dim_);
  return LabeledTensor::from_matrix(rho0_, {"o0", "alpha0"}, {d, e},
                                    {"o0'", "alpha0'"}, {d, e})
      .permuted({"o0", "o0'", "alpha0", "alpha0'"});
}

ProcessTensorMPDO ProcessTensorMPDO::prefix(int j) const {
  if (j < 1 || j > k()) throw std::out_of_range("prefix length out of range");
  ProcessTensorMPDO pt = *this;
  pt.sites_.resize(static_cast<std::size_t>(j));
  pt.superops_.resize(static_cast<std::size_t>(j));
  return pt;
}

//------------------------------------------------------------------------------
// interventions
//------------------------------------------------------------------------------

namespace intervention {

CMatrix identity(int d) { return CMatrix::Identity(d * d, d * d); }

CMatrix unitary(const CMatrix& u) { return unitary_superoperator(u); }

CMatrix measure_prepare(const CMatrix& measurement,
                        const CMatrix& preparation) {
  const auto d = measurement.rows();
  if (measurement.cols() != d || preparation.rows() != d ||
      preparation.cols() != d) {
    throw DimensionError("measurement and preparation must be d x d");
  }
  CMatrix lambda(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index e = 0; e < d; ++e)
          lambda(a * d + b, c * d + e) = preparation(a, b) * measurement(e, c);
  return lambda;
}

}  // namespace intervention

void OperationSequence::validate(int d, double tol) const {
  for (const auto& op : ops) {
    if (op.rows() != d * d || op.cols() != d * d) {
      throw DimensionError("intervention map must be d^2 x d^2");
    }
    const CMatrix c = choi_from_superoperator(op);
    const CMatrix h = 0.5 * (c + c.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol) {
      throw InvariantError("intervention map is not completely positive");
    }
  }
  if (final_measurement && (final_measurement->rows() != d ||
                            final_measurement->cols() != d)) {
    throw DimensionError("final measurement must be d x d");
  }
}

//------------------------------------------------------------------------------
// contractions with operation sequences
//------------------------------------------------------------------------------

namespace {

CMatrix evolve_with_ops(const ProcessTensorMPDO& pt,
                        const std::vector<CMatrix>& ops) {
  CMatrix rho = pt.rho0();
  for (std::size_t m = 0; m < ops.size(); ++m) {
    rho = apply_system_map(ops[m], rho, pt.d(), pt.env_dim());
    rho = apply_superoperator(pt.site_superoperator(static_cast<int>(m)), rho);
  }
  return rho;
}

void check_measurement(const CMatrix& m, int d) {
  if (m.rows() != d || m.cols() != d) {
    throw DimensionError("measurement must be d x d");
  }
  if (!is_hermitian(m, 1e-10)) {
    throw InvariantError("measurement operator is not Hermitian");
  }
}

void check_step(const ProcessTensorMPDO& pt, int j) {
  if (j < 0 || j > pt.k()) throw std::out_of_range("step index out of range");
}

}  // namespace

CMatrix apply(const ProcessTensorMPDO& pt, const OperationSequence& seq) {
  if (static_cast<int>(seq.ops.size()) != pt.k()) {
    throw DimensionError("sequence length must equal the process tensor's k");
  }
  seq.validate(pt.d());
  return partial_trace_env(evolve_with_ops(pt, seq.ops), pt.d(), pt.env_dim());
}

double expectation(const ProcessTensorMPDO& pt, const OperationSequence& seq) {
  if (!seq.final_measurement) {
    throw std::invalid_argument("expectation needs a final measurement");
  }
  const int j = static_cast<int>(seq.ops.size());
  if (j > pt.k()) throw DimensionError("sequence longer than the process tensor");
  seq.validate(pt.d());
  check_measurement(*seq.final_measurement, pt.d());
  const CMatrix rho_sys =
      partial_trace_env(evolve_with_ops(pt, seq.ops), pt.d(), pt.env_dim());
  return (*seq.final_measurement * rho_sys).trace().real();
}

EnvRecursion effective_environment(const ProcessTensorMPDO& pt, int j) {
  check_step(pt, j);
  const int d = pt.d();
  const int env = pt.env_dim();
  EnvRecursion out;
  out.rho = partial_trace_sys(pt.rho0(), d, env);
  out.max_trace_deviation = std::abs(out.rho.trace() - cplx(1.0, 0.0));
  out.rho /= out.rho.trace().real();
  const CMatrix id = CMatrix::Identity(d, d);
  for (int m = 0; m < j; ++m) {
    const CMatrix joint = apply_superoperator(pt.site_superoperator(m),
                                              kron(id, out.rho));
    CMatrix next = partial_trace_sys(joint, d, env);
    const double tr = next.trace().real();
    out.max_trace_deviation =
        std::max(out.max_trace_deviation, std::abs(tr / d - 1.0));
    out.rho = next / tr;
  }
  return out;
}

double local_expectation_averaged(const ProcessTensorMPDO& pt,
                                  const CMatrix& measurement, int j) {
  check_step(pt, j);
  check_measurement(measurement, pt.d());
  if (j == 0) {
    return (measurement * partial_trace_env(pt.rho0(), pt.d(), pt.env_dim()))
        .trace()
        .real();
  }
  const auto env = effective_environment(pt, j - 1);
  const CMatrix joint =
      apply_superoperator(pt.site_superoperator(j - 1),
                          kron(CMatrix::Identity(pt.d(), pt.d()), env.rho));
  return (measurement * partial_trace_env(joint, pt.d(), pt.env_dim()))
      .trace()
      .real();
}

double expectation_do_nothing(const ProcessTensorMPDO& pt,
                              const CMatrix& measurement, int j) {
  check_step(pt, j);
  check_measurement(measurement, pt.d());
  CMatrix rho = pt.rho0();
  for (int m = 0; m < j; ++m) {
    rho = apply_superoperator(pt.site_superoperator(m), rho);
  }
  return (measurement * partial_trace_env(rho, pt.d(), pt.env_dim()))
      .trace()
      .real();
}

//------------------------------------------------------------------------------
// dense materialization
//------------------------------------------------------------------------------

std::string choi_label(char kind, int step, bool primed) {
  std::string s(1, kind);
  s += std::to_string(step);
  if (primed) s += '\'';
  return s;
}

CMatrix ChoiTensor::matrix() const {
  std::vector<std::string> rows;
  rows.push_back(choi_label('o', 0, false));
  for (int m = 0; m < k; ++m) {
    rows.push_back(choi_label('i', m, false));
    rows.push_back(choi_label('o', m + 1, false));
  }
  return tensor.matrix(rows);
}

ChoiTensor materialize(const ProcessTensorMPDO& pt, int max_k) {
  if (pt.k() > max_k) {
    throw ResourceGuardError("refusing to materialize a " +
                             std::to_string(pt.k()) +
                             "-step process tensor (limit " +
                             std::to_string(max_k) + ")");
  }
  auto env_label = [](int step, bool primed) {
    return std::string("alpha") + std::to_string(step) + (primed ? "'" : "");
  };
  LabeledTensor acc = pt.rho0_tensor();
  std::vector<std::string> order = {choi_label('o', 0, false),
                                    choi_label('o', 0, true)};
  for (int m = 0; m < pt.k(); ++m) {
    const auto site = pt.site(m).w().relabeled({
        {wlabel::in, choi_label('i', m, false)},
        {wlabel::in_p, choi_label('i', m, true)},
        {wlabel::out, choi_label('o', m + 1, false)},
        {wlabel::out_p, choi_label('o', m + 1, true)},
        {wlabel::env_in, env_label(m, false)},
        {wlabel::env_in_p, env_label(m, true)},
        {wlabel::env_out, env_label(m + 1, false)},
        {wlabel::env_out_p, env_label(m + 1, true)},
    });
    acc = contract(acc, site,
                   {{env_label(m, false), env_label(m, false)},
                    {env_label(m, true), env_label(m, true)}});
    order.push_back(choi_label('i', m, false));
    order.push_back(choi_label('i', m, true));
    order.push_back(choi_label('o', m + 1, false));
    order.push_back(choi_label('o', m + 1, true));
  }
  const auto trace = LabeledTensor::delta(env_label(pt.k(), false),
                                          env_label(pt.k(), true),
                                          static_cast<std::size_t>(pt.env_dim()));
  acc = contract(acc, trace,
                 {{env_label(pt.k(), false), env_label(pt.k(), false)},
                  {env_label(pt.k(), true), env_label(pt.k(), true)}});
  return ChoiTensor{acc.permuted(order), pt.d(), pt.k()};
}

ContainmentReport check_containment(const ProcessTensorMPDO& pt, double tol,
                                    int max_k) {
  if (pt.k() < 2) throw std::invalid_argument("containment needs k >= 2");
  const int k = pt.k();
  const auto full = materialize(pt, max_k);
  const auto shorter = materialize(pt.prefix(k - 1), max_k);
  const auto d = static_cast<std::size_t>(pt.d());
  const auto traced = contract(
      full.tensor,
      LabeledTensor::delta(choi_label('o', k, false), choi_label('o', k, true), d),
      {{choi_label('o', k, false), choi_label('o', k, false)},
       {choi_label('o', k, true), choi_label('o', k, true)}});
  const auto expected = contract(
      shorter.tensor,
      LabeledTensor::delta(choi_label('i', k - 1, false),
                           choi_label('i', k - 1, true), d),
      {});
  ContainmentReport report;
  report.residual = max_abs_difference(expected, traced);
  report.pass = report.residual < tol;
  return report;
}

//------------------------------------------------------------------------------
// inner product and gauge
//------------------------------------------------------------------------------

cplx inner_product(const ProcessTensorMPDO& a, const ProcessTensorMPDO& b) {
  if (a.d() != b.d() || a.k() != b.k()) {
    throw DimensionError("inner_product needs equal d and k");
  }
  CMatrix env = detail::left_boundary(
      detail::rho0_blocks(a.rho0(), a.d(), a.env_dim()),
      detail::rho0_blocks(b.rho0(), b.d(), b.env_dim()));
  for (int m = 0; m < a.k(); ++m) {
    env = detail::transfer_left(env, detail::site_blocks(a.site(m)),
                                detail::site_blocks(b.site(m)));
  }
  return detail::close(env, detail::right_boundary(a.env_dim(), b.env_dim()));
}

ProcessTensorMPDO gauge_transform_env(const ProcessTensorMPDO& pt,
                                      const CMatrix& u) {
  if (u.rows() != pt.env_dim() || !is_unitary(u, 1e-10)) {
    throw InvariantError("environment gauge must be a D x D unitary");
  }
  const CMatrix v = kron(CMatrix::Identity(pt.d(), pt.d()), u);
  const CMatrix rho0 = v * pt.rho0() * v.adjoint();
  const CMatrix left = kron(v, v.conjugate());
  const CMatrix right = kron(v.adjoint(), v.transpose());
  std::vector<ChannelTensor> sites;
  for (int m = 0; m < pt.k(); ++m) {
    sites.push_back(ChannelTensor::from_superoperator(
        left * pt.site_superoperator(m) * right, pt.d(), pt.env_dim()));
  }
  return ProcessTensorMPDO::from_parts(rho0, std::move(sites));
}

}  // namespace ptnm
