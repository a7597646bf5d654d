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

#include "ptnm/tensorops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <unsupported/Eigen/MatrixFunctions>

namespace ptnm {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  return strides;
}

void check_labels(const std::vector<std::string>& labels,
                  const std::vector<std::size_t>& dims) {
  if (labels.size() != dims.size()) {
    throw DimensionError("label count does not match tensor rank");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw DimensionError("duplicate tensor label '" + l + "'");
    }
  }
  for (auto d : dims) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive");
  }
}

using RowMajorCMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

//------------------------------------------------------------------------------
// LabeledTensor
//------------------------------------------------------------------------------

LabeledTensor::LabeledTensor(std::vector<std::string> labels,
                             std::vector<std::size_t> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  check_labels(labels_, dims_);
  data_.assign(product(dims_), cplx{0.0, 0.0});
}

LabeledTensor::LabeledTensor(std::vector<std::string> labels,
                             std::vector<std::size_t> dims,
                             std::vector<cplx> data)
    : labels_(std::move(labels)), dims_(std::move(dims)),
      data_(std::move(data)) {
  check_labels(labels_, dims_);
  if (data_.size() != product(dims_)) {
    throw DimensionError("tensor data size does not match product of dims");
  }
}

LabeledTensor LabeledTensor::scalar(cplx value) {
  return LabeledTensor({}, {}, {value});
}

LabeledTensor LabeledTensor::delta(const std::string& a, const std::string& b,
                                   std::size_t dim) {
  LabeledTensor t({a, b}, {dim, dim});
  for (std::size_t i = 0; i < dim; ++i) t.data_[i * dim + i] = 1.0;
  return t;
}

LabeledTensor LabeledTensor::from_matrix(const CMatrix& m,
                                         std::vector<std::string> row_labels,
                                         std::vector<std::size_t> row_dims,
                                         std::vector<std::string> col_labels,
                                         std::vector<std::size_t> col_dims) {
  const auto rows = product(row_dims);
  const auto cols = product(col_dims);
  if (static_cast<std::size_t>(m.rows()) != rows ||
      static_cast<std::size_t>(m.cols()) != cols) {
    throw DimensionError("matrix shape does not match row/column dims");
  }
  std::vector<std::string> labels = std::move(row_labels);
  labels.insert(labels.end(), col_labels.begin(), col_labels.end());
  std::vector<std::size_t> dims = std::move(row_dims);
  dims.insert(dims.end(), col_dims.begin(), col_dims.end());
  std::vector<cplx> data(rows * cols);
  Eigen::Map<RowMajorCMatrix>(data.data(), static_cast<Eigen::Index>(rows),
                              static_cast<Eigen::Index>(cols)) = m;
  return LabeledTensor(std::move(labels), std::move(dims), std::move(data));
}

bool LabeledTensor::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t LabeledTensor::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw DimensionError("unknown tensor label '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t LabeledTensor::dim(const std::string& label) const {
  return dims_[index_of(label)];
}

std::size_t LabeledTensor::offset(std::span<const std::size_t> idx) const {
  if (idx.size() != dims_.size()) {
    throw DimensionError("index arity does not match tensor rank");
  }
  std::size_t off = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= dims_[i]) throw DimensionError("tensor index out of range");
    off = off * dims_[i] + idx[i];
  }
  return off;
}

cplx& LabeledTensor::at(std::span<const std::size_t> idx) {
  return data_[offset(idx)];
}

cplx LabeledTensor::at(std::span<const std::size_t> idx) const {
  return data_[offset(idx)];
}

LabeledTensor LabeledTensor::permuted(
    const std::vector<std::string>& order) const {
  if (order.size() != labels_.size()) {
    throw DimensionError("permutation must list every label exactly once");
  }
  std::vector<std::size_t> perm(order.size());
  std::vector<std::size_t> new_dims(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    perm[i] = index_of(order[i]);
    new_dims[i] = dims_[perm[i]];
  }
  LabeledTensor out(order, new_dims);  // validates uniqueness
  if (std::is_sorted(perm.begin(), perm.end())) {
    out.data_ = data_;
    return out;
  }
  const auto old_strides = strides_of(dims_);
  std::vector<std::size_t> src_strides(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    src_strides[i] = old_strides[perm[i]];
  }
  std::vector<std::size_t> counter(order.size(), 0);
  std::size_t src = 0;
  const std::size_t rank = order.size();
  for (std::size_t dst = 0; dst < out.data_.size(); ++dst) {
    out.data_[dst] = data_[src];
    for (std::size_t ax = rank; ax-- > 0;) {
      ++counter[ax];
      src += src_strides[ax];
      if (counter[ax] < new_dims[ax]) break;
      src -= src_strides[ax] * new_dims[ax];
      counter[ax] = 0;
    }
  }
  return out;
}

LabeledTensor LabeledTensor::relabeled(
    const std::vector<std::pair<std::string, std::string>>& renames) const {
  auto labels = labels_;
  for (const auto& [from, to] : renames) {
    labels[index_of(from)] = to;
  }
  return LabeledTensor(std::move(labels), dims_, data_);
}

CMatrix LabeledTensor::matrix(const std::vector<std::string>& row_labels) const {
  std::vector<std::string> order = row_labels;
  std::size_t rows = 1;
  for (const auto& l : row_labels) rows *= dim(l);
  for (const auto& l : labels_) {
    if (std::find(row_labels.begin(), row_labels.end(), l) == row_labels.end()) {
      order.push_back(l);
    }
  }
  const auto p = permuted(order);
  const std::size_t cols = data_.size() / rows;
  return Eigen::Map<const RowMajorCMatrix>(p.data_.data(),
                                           static_cast<Eigen::Index>(rows),
                                           static_cast<Eigen::Index>(cols));
}

LabeledTensor LabeledTensor::conj() const {
  LabeledTensor out = *this;
  for (auto& x : out.data_) x = std::conj(x);
  return out;
}

LabeledTensor LabeledTensor::scaled(cplx factor) const {
  LabeledTensor out = *this;
  for (auto& x : out.data_) x *= factor;
  return out;
}

double LabeledTensor::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

//------------------------------------------------------------------------------
// contraction
//------------------------------------------------------------------------------

LabeledTensor contract(
    const LabeledTensor& a, const LabeledTensor& b,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> a_sum, b_sum;
  std::size_t inner = 1;
  for (const auto& [la, lb] : pairs) {
    const auto da = a.dim(la);
    const auto db = b.dim(lb);
    if (da != db) {
      throw DimensionError("contracted labels '" + la + "' and '" + lb +
                           "' have different dimensions");
    }
    a_sum.push_back(la);
    b_sum.push_back(lb);
    inner *= da;
  }
  std::vector<std::string> a_free, b_free;
  std::vector<std::size_t> a_free_dims, b_free_dims;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (std::find(a_sum.begin(), a_sum.end(), a.labels()[i]) == a_sum.end()) {
      a_free.push_back(a.labels()[i]);
      a_free_dims.push_back(a.dims()[i]);
    }
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (std::find(b_sum.begin(), b_sum.end(), b.labels()[i]) == b_sum.end()) {
      b_free.push_back(b.labels()[i]);
      b_free_dims.push_back(b.dims()[i]);
    }
  }
  for (const auto& l : b_free) {
    if (std::find(a_free.begin(), a_free.end(), l) != a_free.end()) {
      throw DimensionError("contraction result would repeat label '" + l + "'");
    }
  }
  // a: (free | summed), b: (summed | free) => plain matrix product.
  std::vector<std::string> a_order = a_free;
  a_order.insert(a_order.end(), a_sum.begin(), a_sum.end());
  std::vector<std::string> b_order = b_sum;
  b_order.insert(b_order.end(), b_free.begin(), b_free.end());
  const auto ap = a.permuted(a_order);
  const auto bp = b.permuted(b_order);
  const auto rows = static_cast<Eigen::Index>(product(a_free_dims));
  const auto cols = static_cast<Eigen::Index>(product(b_free_dims));
  const auto k = static_cast<Eigen::Index>(inner);
  Eigen::Map<const RowMajorCMatrix> am(ap.data().data(), rows, k);
  Eigen::Map<const RowMajorCMatrix> bm(bp.data().data(), k, cols);
  std::vector<cplx> out(static_cast<std::size_t>(rows * cols));
  Eigen::Map<RowMajorCMatrix>(out.data(), rows, cols).noalias() = am * bm;

  std::vector<std::string> labels = a_free;
  labels.insert(labels.end(), b_free.begin(), b_free.end());
  std::vector<std::size_t> dims = a_free_dims;
  dims.insert(dims.end(), b_free_dims.begin(), b_free_dims.end());
  return LabeledTensor(std::move(labels), std::move(dims), std::move(out));
}

double max_abs_difference(const LabeledTensor& a, const LabeledTensor& b) {
  const auto bp = b.permuted(a.labels());
  if (bp.dims() != a.dims()) throw DimensionError("tensor shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - bp.data()[i]));
  }
  return m;
}

//------------------------------------------------------------------------------
// decompositions
//------------------------------------------------------------------------------

HermitianEigen eig_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("eig_hermitian needs a square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw InvariantError("matrix is not Hermitian (max |m - m^dagger| = " +
                         std::to_string(asym) + ")");
  }
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const auto n = h.rows();
  HermitianEigen out;
  out.spectrum.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.spectrum.values[static_cast<std::size_t>(i)] =
        es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

HermitianEigen eig_hermitian(const LabeledTensor& t,
                             const std::vector<std::string>& row_labels,
                             double tol) {
  const CMatrix m = t.matrix(row_labels);
  return eig_hermitian(m, tol);
}

SvdSplit svd_split(const LabeledTensor& t,
                   const std::vector<std::string>& left_labels,
                   const std::string& bond_label) {
  if (left_labels.empty() || left_labels.size() >= t.rank()) {
    throw DimensionError("svd_split needs a nonempty proper subset of labels");
  }
  std::vector<std::size_t> left_dims;
  for (const auto& l : left_labels) left_dims.push_back(t.dim(l));
  std::vector<std::string> right_labels;
  std::vector<std::size_t> right_dims;
  for (std::size_t i = 0; i < t.rank(); ++i) {
    const auto& l = t.labels()[i];
    if (std::find(left_labels.begin(), left_labels.end(), l) ==
        left_labels.end()) {
      right_labels.push_back(l);
      right_dims.push_back(t.dims()[i]);
    }
  }
  const CMatrix m = t.matrix(left_labels);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto r = svd.singularValues().size();
  SvdSplit out;
  out.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() + r);
  const auto rr = static_cast<std::size_t>(r);
  out.u = LabeledTensor::from_matrix(svd.matrixU(), left_labels, left_dims,
                                     {bond_label}, {rr});
  out.v = LabeledTensor::from_matrix(svd.matrixV().adjoint(), {bond_label},
                                     {rr}, right_labels, right_dims);
  return out;
}

//------------------------------------------------------------------------------
// entropies
//------------------------------------------------------------------------------

namespace {

std::vector<double> normalized_probabilities(const Spectrum& s,
                                             double clip_tol) {
  std::vector<double> p;
  p.reserve(s.values.size());
  double sum = 0.0;
  for (double v : s.values) {
    if (v < -clip_tol) {
      throw InvariantError("negative eigenvalue " + std::to_string(v) +
                           " in density spectrum");
    }
    v = std::clamp(v, 0.0, 1.0 + 1e-8);
    p.push_back(v);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InvariantError("spectrum does not sum to one (sum = " +
                         std::to_string(sum) + ")");
  }
  for (auto& v : p) v = std::min(v / sum, 1.0);
  return p;
}

}  // namespace

Spectrum density_spectrum(const CMatrix& rho, double clip_tol) {
  auto eig = eig_hermitian(rho);
  for (auto& v : eig.spectrum.values) {
    if (v < -clip_tol) {
      throw InvariantError("density matrix has negative eigenvalue " +
                           std::to_string(v));
    }
    if (v < 0.0) v = 0.0;
  }
  return eig.spectrum;
}

double von_neumann_entropy(const Spectrum& s, double clip_tol) {
  double h = 0.0;
  for (double p : normalized_probabilities(s, clip_tol)) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double renyi_entropy(const Spectrum& s, double alpha, double clip_tol) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw std::invalid_argument("Renyi order must be positive and != 1");
  }
  double acc = 0.0;
  for (double p : normalized_probabilities(s, clip_tol)) {
    if (p > 0.0) acc += std::pow(p, alpha);
  }
  return std::max(std::log2(acc) / (1.0 - alpha), 0.0);
}

//------------------------------------------------------------------------------
// matrix exponential
//------------------------------------------------------------------------------

bool is_normal(const CMatrix& m, double tol) {
  const double scale = std::max(1.0, m.squaredNorm());
  return (m * m.adjoint() - m.adjoint() * m).norm() <= tol * scale;
}

CMatrix matrix_exp(const CMatrix& m, double t) {
  if (m.rows() != m.cols()) {
    throw DimensionError("matrix_exp needs a square matrix");
  }
  if (!m.allFinite()) throw std::invalid_argument("matrix_exp: non-finite entry");
  const CMatrix a = m * t;
  if (is_normal(a)) {
    // Schur form of a normal matrix is diagonal: A = U diag(z) U^dagger.
    Eigen::ComplexSchur<CMatrix> schur(a);
    const CMatrix& u = schur.matrixU();
    const CMatrix& tri = schur.matrixT();
    CVector z = tri.diagonal().unaryExpr([](cplx x) { return std::exp(x); });
    return u * z.asDiagonal() * u.adjoint();
  }
  return a.exp();
}

CMatrix psd_sqrt(const CMatrix& m) {
  const auto eig = eig_hermitian(m, 1e-8);
  RVector s(static_cast<Eigen::Index>(eig.spectrum.values.size()));
  for (std::size_t i = 0; i < eig.spectrum.values.size(); ++i) {
    s(static_cast<Eigen::Index>(i)) =
        std::sqrt(std::max(eig.spectrum.values[i], 0.0));
  }
  return eig.vectors * s.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace ptnm
