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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ptnm/tensorops.hpp"

using namespace ptnm;
using Catch::Matchers::WithinAbs;

namespace {

LabeledTensor random_tensor(std::vector<std::string> labels,
                            std::vector<std::size_t> dims, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  LabeledTensor t(std::move(labels), std::move(dims));
  for (auto& z : t.data()) z = cplx{n(rng), n(rng)};
  return t;
}

CMatrix random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx{n(rng), n(rng)};
  return m;
}

}  // namespace

TEST_CASE("contract matches an explicit loop", "[tensorops]") {
  std::mt19937_64 rng(1);
  auto a = random_tensor({"i", "j", "k"}, {2, 3, 4}, rng);
  auto b = random_tensor({"k", "l", "j"}, {4, 5, 3}, rng);
  auto c = contract(a, b, {{"j", "j"}, {"k", "k"}});
  REQUIRE(c.labels() == std::vector<std::string>{"i", "l"});
  double err = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t l = 0; l < 5; ++l) {
      cplx ref{};
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 4; ++k) ref += a.at({i, j, k}) * b.at({k, l, j});
      err = std::max(err, std::abs(ref - c.at({i, l})));
    }
  CHECK(err < 1e-12);
}

TEST_CASE("contract over no pairs is an outer product", "[tensorops]") {
  std::mt19937_64 rng(2);
  auto a = random_tensor({"a"}, {3}, rng);
  auto b = random_tensor({"b"}, {2}, rng);
  auto c = contract(a, b, {});
  REQUIRE(c.rank() == 2);
  CHECK(std::abs(c.at({2, 1}) - a.at({2}) * b.at({1})) < 1e-14);
}

TEST_CASE("contract rejects bad pairs", "[tensorops]") {
  LabeledTensor a({"i", "j"}, {2, 3});
  LabeledTensor b({"j", "k"}, {2, 3});
  CHECK_THROWS_AS(contract(a, b, {{"j", "j"}}), DimensionError);
  CHECK_THROWS_AS(contract(a, b, {{"x", "j"}}), DimensionError);
  LabeledTensor c({"i", "m"}, {2, 2});
  CHECK_THROWS_AS(contract(a, c, {{"j", "m"}}), DimensionError);  // "i" twice
}

TEST_CASE("constructor validates labels and dims", "[tensorops]") {
  CHECK_THROWS_AS(LabeledTensor({"a", "a"}, {2, 2}), DimensionError);
  CHECK_THROWS_AS(LabeledTensor({"a"}, {0}), DimensionError);
  CHECK_THROWS_AS(LabeledTensor({"a"}, {2}, std::vector<cplx>(3)), DimensionError);
}

TEST_CASE("permutation and relabeling preserve entries", "[tensorops]") {
  std::mt19937_64 rng(3);
  auto a = random_tensor({"x", "y", "z"}, {2, 3, 2}, rng);
  auto p = a.permuted({"z", "x", "y"});
  CHECK(p.at({1, 0, 2}) == a.at({0, 2, 1}));
  CHECK(max_abs_difference(a, p) == 0.0);
  auto r = a.relabeled({{"x", "u"}});
  CHECK(r.has_label("u"));
  CHECK_FALSE(r.has_label("x"));
}

TEST_CASE("delta contraction is a relabel", "[tensorops]") {
  std::mt19937_64 rng(4);
  auto a = random_tensor({"p", "q"}, {3, 2}, rng);
  auto c = contract(a, LabeledTensor::delta("q", "r", 2), {{"q", "q"}});
  CHECK(max_abs_difference(a.relabeled({{"q", "r"}}), c) < 1e-15);
}

TEST_CASE("matrix round trip", "[tensorops]") {
  std::mt19937_64 rng(5);
  const CMatrix m = random_matrix(6, 4, rng);
  auto t = LabeledTensor::from_matrix(m, {"a", "b"}, {2, 3}, {"c", "d"}, {2, 2});
  CHECK((t.matrix({"a", "b"}) - m).norm() < 1e-15);
  // Swapping the row label order permutes rows.
  const CMatrix sw = t.matrix({"b", "a"});
  CHECK(std::abs(sw(1 * 2 + 0, 3) - m(0 * 3 + 1, 3)) < 1e-15);
}

TEST_CASE("svd split reconstructs the tensor", "[tensorops]") {
  std::mt19937_64 rng(6);
  auto t = random_tensor({"a", "b", "c"}, {2, 3, 4}, rng);
  auto s = svd_split(t, {"a", "c"});
  REQUIRE(s.singular_values.size() == 3);
  for (std::size_t i = 1; i < s.singular_values.size(); ++i) {
    CHECK(s.singular_values[i] <= s.singular_values[i - 1]);
  }
  LabeledTensor sv({"bond", "bond2"}, {3, 3});
  for (std::size_t i = 0; i < 3; ++i) sv.at({i, i}) = s.singular_values[i];
  auto us = contract(s.u, sv, {{"bond", "bond"}});
  auto back = contract(us, s.v, {{"bond2", "bond"}});
  CHECK(max_abs_difference(t, back) < 1e-12);
}

TEST_CASE("entropies of known spectra", "[tensorops]") {
  CHECK_THAT(von_neumann_entropy(Spectrum{{0.5, 0.5}}), WithinAbs(1.0, 1e-14));
  CHECK_THAT(von_neumann_entropy(Spectrum{{1.0, 0.0}}), WithinAbs(0.0, 1e-14));
  CHECK_THAT(von_neumann_entropy(Spectrum{{0.25, 0.25, 0.25, 0.25}}),
             WithinAbs(2.0, 1e-14));
  CHECK_THAT(renyi_entropy(Spectrum{{0.5, 0.5}}, 2.0), WithinAbs(1.0, 1e-14));
  // Tiny negative rounding is clipped; real negativity is an error.
  CHECK_THAT(von_neumann_entropy(Spectrum{{1.0, -1e-14}}), WithinAbs(0.0, 1e-12));
  CHECK_THROWS_AS(von_neumann_entropy(Spectrum{{1.1, -0.1}}), InvariantError);
  CHECK_THROWS_AS(von_neumann_entropy(Spectrum{{0.3, 0.3}}), InvariantError);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input", "[tensorops]") {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(eig_hermitian(m), InvariantError);
  m(1, 0) = 1.0;
  auto e = eig_hermitian(m);
  CHECK_THAT(e.spectrum.values[0], WithinAbs(2.0, 1e-14));
  CHECK_THAT(e.spectrum.values[1], WithinAbs(0.0, 1e-14));
}

TEST_CASE("matrix_exp agrees with a Taylor series", "[tensorops]") {
  std::mt19937_64 rng(7);
  const CMatrix a = 0.3 * random_matrix(4, 4, rng);  // non-normal
  CMatrix term = CMatrix::Identity(4, 4);
  CMatrix sum = term;
  for (int n = 1; n < 40; ++n) {
    term = term * a / static_cast<double>(n);
    sum += term;
  }
  CHECK((matrix_exp(a) - sum).norm() < 1e-12);
  const CMatrix h = a + a.adjoint();  // normal route
  CHECK(is_normal(h));
  const CMatrix eh = matrix_exp(h, 0.5);
  CHECK((eh * eh - matrix_exp(h)).norm() < 1e-11);
}

TEST_CASE("psd_sqrt squares back", "[tensorops]") {
  std::mt19937_64 rng(8);
  const CMatrix g = random_matrix(3, 3, rng);
  const CMatrix p = g * g.adjoint();
  const CMatrix s = psd_sqrt(p);
  CHECK((s * s - p).norm() < 1e-10);
}
