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

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptnm/types.hpp"

namespace ptnm {

/// Dense complex tensor whose indices are addressed by name.
///
/// Storage is row-major: the last label varies fastest. Labels are unique
/// and every dimension is positive.
class LabeledTensor {
 public:
  LabeledTensor() = default;
  LabeledTensor(std::vector<std::string> labels, std::vector<std::size_t> dims);
  LabeledTensor(std::vector<std::string> labels, std::vector<std::size_t> dims,
                std::vector<cplx> data);

  /// Rank-0 tensor holding a single value.
  static LabeledTensor scalar(cplx value);

  /// Kronecker delta over two labels of equal dimension.
  static LabeledTensor delta(const std::string& a, const std::string& b,
                             std::size_t dim);

  /// Wraps a matrix; rows are split over `row_labels`, columns over
  /// `col_labels`, both in row-major order.
  static LabeledTensor from_matrix(const CMatrix& m,
                                   std::vector<std::string> row_labels,
                                   std::vector<std::size_t> row_dims,
                                   std::vector<std::string> col_labels,
                                   std::vector<std::size_t> col_dims);

  std::size_t rank() const { return labels_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  bool has_label(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  std::size_t dim(const std::string& label) const;

  cplx& at(std::span<const std::size_t> idx);
  cplx at(std::span<const std::size_t> idx) const;
  cplx& at(std::initializer_list<std::size_t> idx) {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  cplx at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  /// Same data with indices reordered to `order` (a permutation of labels()).
  LabeledTensor permuted(const std::vector<std::string>& order) const;

  /// Renames labels; entries of `renames` are (old, new) pairs.
  LabeledTensor relabeled(
      const std::vector<std::pair<std::string, std::string>>& renames) const;

  /// Matrix view: rows over `row_labels` (in that order), columns over the
  /// remaining labels in their current order.
  CMatrix matrix(const std::vector<std::string>& row_labels) const;

  LabeledTensor conj() const;
  LabeledTensor scaled(cplx factor) const;

  double frobenius_norm() const;

 private:
  std::size_t offset(std::span<const std::size_t> idx) const;

  std::vector<std::string> labels_;
  std::vector<std::size_t> dims_;
  std::vector<cplx> data_;
};

/// Sums over the paired indices (label in `a`, label in `b`). The result
/// carries the uncontracted labels of `a` followed by those of `b`.
LabeledTensor contract(
    const LabeledTensor& a, const LabeledTensor& b,
    const std::vector<std::pair<std::string, std::string>>& pairs);

/// Elementwise max |a - b| after aligning b's label order to a's.
double max_abs_difference(const LabeledTensor& a, const LabeledTensor& b);

/// Eigenvalues sorted in descending order.
struct Spectrum {
  std::vector<double> values;
};

struct HermitianEigen {
  Spectrum spectrum;
  CMatrix vectors;  // columns ordered like spectrum.values
};

/// Eigenvalue clipping threshold for density-matrix spectra.
inline constexpr double kClipTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized
/// before diagonalization; larger deviations from Hermiticity throw.
HermitianEigen eig_hermitian(const CMatrix& m, double tol = kHermitianTol);
HermitianEigen eig_hermitian(const LabeledTensor& t,
                             const std::vector<std::string>& row_labels,
                             double tol = kHermitianTol);

struct SvdSplit {
  LabeledTensor u;                   // left labels + bond_label
  std::vector<double> singular_values;  // descending, >= 0
  LabeledTensor v;                   // bond_label + right labels
};

/// Bipartition `t` into (left_labels | rest) and factor M = U diag(s) V.
SvdSplit svd_split(const LabeledTensor& t,
                   const std::vector<std::string>& left_labels,
                   const std::string& bond_label = "bond");

/// Density-matrix spectrum: eigenvalues of a Hermitian matrix with the
/// [-kClipTol, 0) range clipped to zero. More negative values throw.
Spectrum density_spectrum(const CMatrix& rho, double clip_tol = kClipTol);

/// Von Neumann entropy in bits (log base 2).
double von_neumann_entropy(const Spectrum& s, double clip_tol = kClipTol);

/// Renyi entropy of order alpha in bits.
double renyi_entropy(const Spectrum& s, double alpha,
                     double clip_tol = kClipTol);

/// exp(m * t). Normal matrices go through their eigendecomposition,
/// everything else through Pade scaling and squaring.
CMatrix matrix_exp(const CMatrix& m, double t = 1.0);

/// True when m m^dagger == m^dagger m within tol (Frobenius, relative).
bool is_normal(const CMatrix& m, double tol = 1e-12);

/// Hermitian positive square root; small negative eigenvalues clipped.
CMatrix psd_sqrt(const CMatrix& m);

}  // namespace ptnm
