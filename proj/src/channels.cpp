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

#include "ptnm/channels.hpp"

#include <algorithm>
#include <cmath>

namespace ptnm {

namespace {

const std::vector<std::string>& w_labels() {
  static const std::vector<std::string> labels = {
      wlabel::in,      wlabel::in_p,     wlabel::out,     wlabel::out_p,
      wlabel::env_in,  wlabel::env_in_p, wlabel::env_out, wlabel::env_out_p};
  return labels;
}

}  // namespace

void KrausChannel::validate(double tol) const {
  if (ops.empty()) throw InvariantError("Kraus channel has no operators");
  const Eigen::Index n = static_cast<Eigen::Index>(d) * env_dim;
  if (static_cast<Eigen::Index>(ops.size()) > n * n) {
    throw InvariantError("Kraus rank exceeds (dD)^2");
  }
  CMatrix acc = CMatrix::Zero(n, n);
  for (const auto& a : ops) {
    if (a.rows() != n || a.cols() != n) {
      throw DimensionError("Kraus operator is not (dD x dD)");
    }
    acc += a.adjoint() * a;
  }
  const double res = (acc - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (res > tol) {
    throw InvariantError("Kraus operators are not trace preserving (residual " +
                         std::to_string(res) + ")");
  }
}

//------------------------------------------------------------------------------
// ChannelTensor
//------------------------------------------------------------------------------

ChannelTensor::ChannelTensor(LabeledTensor w) : w_(std::move(w)) {
  if (w_.labels() != w_labels()) {
    throw DimensionError("channel tensor labels must be (i,i',o,o',alpha,"
                         "alpha',beta,beta')");
  }
  const auto& dims = w_.dims();
  if (dims[0] != dims[1] || dims[0] != dims[2] || dims[0] != dims[3] ||
      dims[4] != dims[5] || dims[4] != dims[6] || dims[4] != dims[7]) {
    throw DimensionError("channel tensor dims must be (d,d,d,d,D,D,D,D)");
  }
  d_ = static_cast<int>(dims[0]);
  env_dim_ = static_cast<int>(dims[4]);
}

ChannelTensor ChannelTensor::from_superoperator(const CMatrix& s, int d,
                                                int env_dim) {
  const int n = d * env_dim;
  if (s.rows() != n * n || s.cols() != n * n) {
    throw DimensionError("superoperator must be (dD)^2 x (dD)^2");
  }
  const auto du = static_cast<std::size_t>(d);
  const auto De = static_cast<std::size_t>(env_dim);
  LabeledTensor w(w_labels(), {du, du, du, du, De, De, De, De});
  auto& data = w.data();
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i)
    for (int ip = 0; ip < d; ++ip)
      for (int o = 0; o < d; ++o)
        for (int op = 0; op < d; ++op)
          for (int a = 0; a < env_dim; ++a)
            for (int ap = 0; ap < env_dim; ++ap)
              for (int b = 0; b < env_dim; ++b)
                for (int bp = 0; bp < env_dim; ++bp) {
                  const int row = (o * env_dim + b) * n + (op * env_dim + bp);
                  const int col = (i * env_dim + a) * n + (ip * env_dim + ap);
                  data[idx++] = s(row, col);
                }
  return ChannelTensor(std::move(w));
}

CMatrix ChannelTensor::superoperator() const {
  const int n = d_ * env_dim_;
  CMatrix s(n * n, n * n);
  const auto& data = w_.data();
  std::size_t idx = 0;
  for (int i = 0; i < d_; ++i)
    for (int ip = 0; ip < d_; ++ip)
      for (int o = 0; o < d_; ++o)
        for (int op = 0; op < d_; ++op)
          for (int a = 0; a < env_dim_; ++a)
            for (int ap = 0; ap < env_dim_; ++ap)
              for (int b = 0; b < env_dim_; ++b)
                for (int bp = 0; bp < env_dim_; ++bp) {
                  const int row = (o * env_dim_ + b) * n + (op * env_dim_ + bp);
                  const int col = (i * env_dim_ + a) * n + (ip * env_dim_ + ap);
                  s(row, col) = data[idx++];
                }
  return s;
}

Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
ChannelTensor::block(int i, int ip, int o, int op) const {
  const int d2 = env_dim_ * env_dim_;
  const std::size_t p =
      static_cast<std::size_t>(((i * d_ + ip) * d_ + o) * d_ + op);
  return {w_.data().data() + p * static_cast<std::size_t>(d2 * d2), d2, d2};
}

CMatrix ChannelTensor::apply(const CMatrix& rho) const {
  return apply_superoperator(superoperator(), rho);
}

void LindbladSpec::validate(double tol) const {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw DimensionError("Hamiltonian must be square");
  }
  if (!is_hermitian(hamiltonian, tol)) {
    throw InvariantError("Hamiltonian is not Hermitian");
  }
  for (const auto& j : jumps) {
    if (j.rate < 0.0) throw InvariantError("negative Lindblad rate");
    if (j.op.rows() != hamiltonian.rows() || j.op.cols() != hamiltonian.cols()) {
      throw DimensionError("jump operator dimension differs from Hamiltonian");
    }
  }
}

//------------------------------------------------------------------------------
// conversions
//------------------------------------------------------------------------------

CMatrix kraus_to_superoperator(const std::vector<CMatrix>& ops) {
  if (ops.empty()) throw InvariantError("Kraus channel has no operators");
  const auto n = ops.front().rows();
  CMatrix s = CMatrix::Zero(n * n, n * n);
  for (const auto& a : ops) s += kron(a, a.conjugate());
  return s;
}

ChannelTensor kraus_to_w(const KrausChannel& ch) {
  ch.validate();
  return ChannelTensor::from_superoperator(kraus_to_superoperator(ch.ops), ch.d,
                                           ch.env_dim);
}

CMatrix lindblad_superoperator(const LindbladSpec& spec) {
  spec.validate();
  const auto n = spec.hamiltonian.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const cplx minus_i{0.0, -1.0};
  CMatrix l = minus_i * (kron(spec.hamiltonian, id) -
                         kron(id, spec.hamiltonian.transpose()));
  for (const auto& j : spec.jumps) {
    if (j.rate == 0.0) continue;
    const CMatrix ldl = j.op.adjoint() * j.op;
    l += j.rate * (2.0 * kron(j.op, j.op.conjugate()) - kron(ldl, id) -
                   kron(id, ldl.transpose()));
  }
  return l;
}

KrausChannel superop_to_kraus(const CMatrix& s, int d, int env_dim,
                              double cp_tol, double drop_tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * env_dim;
  if (s.rows() != n * n || s.cols() != n * n) {
    throw DimensionError("superoperator must be (dD)^2 x (dD)^2");
  }
  // Trace preservation: sum_a S((a a), (c e)) = delta(c, e).
  double tp = 0.0;
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index e = 0; e < n; ++e) {
      cplx acc = 0.0;
      for (Eigen::Index a = 0; a < n; ++a) acc += s(a * n + a, c * n + e);
      tp = std::max(tp, std::abs(acc - (c == e ? 1.0 : 0.0)));
    }
  if (tp > cp_tol) {
    throw InvariantError("superoperator is not trace preserving (residual " +
                         std::to_string(tp) + ")");
  }
  const CMatrix choi = choi_from_superoperator(s);
  const auto eig = eig_hermitian(choi, 1e-8);
  KrausChannel out;
  out.d = d;
  out.env_dim = env_dim;
  for (std::size_t k = 0; k < eig.spectrum.values.size(); ++k) {
    const double lam = eig.spectrum.values[k];
    if (lam < -cp_tol) {
      throw InvariantError("superoperator is not completely positive (Choi "
                           "eigenvalue " + std::to_string(lam) + ")");
    }
    if (lam < drop_tol) continue;
    const CVector v = eig.vectors.col(static_cast<Eigen::Index>(k)) * std::sqrt(lam);
    out.ops.push_back(unvectorize(v, n));
  }
  if (out.ops.empty()) throw InvariantError("superoperator has zero Choi matrix");
  return out;
}

CMatrix trace_preservation_matrix(const ChannelTensor& ch) {
  const int d = ch.d();
  const int env = ch.env_dim();
  const int n = d * env;
  CMatrix t = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int ip = 0; ip < d; ++ip)
      for (int o = 0; o < d; ++o) {
        const auto blk = ch.block(i, ip, o, o);
        for (int a = 0; a < env; ++a)
          for (int ap = 0; ap < env; ++ap)
            for (int b = 0; b < env; ++b)
              t(i * env + a, ip * env + ap) += blk(a * env + ap, b * env + b);
      }
  return t;
}

CMatrix channel_choi(const ChannelTensor& ch) {
  return choi_from_superoperator(ch.superoperator());
}

CptpDiagnostic check_cptp(const ChannelTensor& ch, double tol) {
  CptpDiagnostic diag;
  const CMatrix t = trace_preservation_matrix(ch);
  const CMatrix dev = t - CMatrix::Identity(t.rows(), t.cols());
  Eigen::JacobiSVD<CMatrix> svd(dev);
  diag.tp_residual = svd.singularValues().sum();
  const CMatrix c = channel_choi(ch);
  const CMatrix h = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  diag.cp_min_eigenvalue = es.eigenvalues()(0);
  diag.pass = diag.tp_residual < tol && diag.cp_min_eigenvalue > -tol;
  return diag;
}

//------------------------------------------------------------------------------
// random sampling
//------------------------------------------------------------------------------

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

KrausChannel random_stinespring_channel(int d, int env_dim, int rank,
                                        std::mt19937_64& rng) {
  const int n = d * env_dim;
  if (rank < 1 || rank > n * n) {
    throw std::invalid_argument("Kraus rank must lie in [1, (dD)^2]");
  }
  const CMatrix u = random_unitary(n * rank, rng);
  const CMatrix v = u.leftCols(n);  // isometry C^n -> C^(n rank)
  KrausChannel ch;
  ch.d = d;
  ch.env_dim = env_dim;
  for (int s = 0; s < rank; ++s) ch.ops.push_back(v.block(s * n, 0, n, n));
  return ch;
}

CMatrix random_density_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace ptnm
