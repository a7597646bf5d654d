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

#include <algorithm>
#include <cmath>
#include <random>

#include "ptnm/channels.hpp"
#include "ptnm/models.hpp"

using namespace ptnm;
using Catch::Matchers::WithinAbs;

namespace {

// Direct Kraus action, the reference for every channel representation.
CMatrix kraus_action(const std::vector<CMatrix>& ops, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& a : ops) out += a * rho * a.adjoint();
  return out;
}

}  // namespace

TEST_CASE("vectorization is row-major", "[operators]") {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const CVector v = vectorize(m);
  CHECK(v(1) == cplx{2.0});
  CHECK(v(2) == cplx{3.0});
  CHECK((unvectorize(v, 2) - m).norm() == 0.0);
  std::mt19937_64 rng(1);
  const CMatrix u = random_unitary(3, rng);
  const CMatrix rho = random_density_matrix(3, rng);
  CHECK((apply_superoperator(unitary_superoperator(u), rho) - u * rho * u.adjoint())
            .norm() < 1e-13);
}

TEST_CASE("choi reshuffle is an involution", "[operators]") {
  std::mt19937_64 rng(2);
  const auto ch = random_stinespring_channel(2, 1, 3, rng);
  const CMatrix s = kraus_to_superoperator(ch.ops);
  CHECK((superoperator_from_choi(choi_from_superoperator(s)) - s).norm() < 1e-15);
}

TEST_CASE("partial traces of a product state", "[operators]") {
  std::mt19937_64 rng(3);
  const CMatrix a = random_density_matrix(2, rng);
  const CMatrix b = random_density_matrix(3, rng);
  const CMatrix ab = kron(a, b);
  CHECK((partial_trace_env(ab, 2, 3) - a).norm() < 1e-14);
  CHECK((partial_trace_sys(ab, 2, 3) - b).norm() < 1e-14);
}

TEST_CASE("identity channel tensor is a product of deltas", "[channels]") {
  KrausChannel ch{{CMatrix::Identity(4, 4)}, 2, 2};
  const auto w = kraus_to_w(ch);
  double err = 0.0;
  const auto& t = w.w();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t ip = 0; ip < 2; ++ip)
      for (std::size_t o = 0; o < 2; ++o)
        for (std::size_t op = 0; op < 2; ++op)
          for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t ap = 0; ap < 2; ++ap)
              for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t bp = 0; bp < 2; ++bp) {
                  const double ref =
                      (i == o && a == b && ip == op && ap == bp) ? 1.0 : 0.0;
                  err = std::max(err, std::abs(t.at({i, ip, o, op, a, ap, b, bp}) - ref));
                }
  CHECK(err == 0.0);
}

TEST_CASE("dephasing Kraus channel damps coherences", "[channels]") {
  const double p = 0.2;
  KrausChannel ch{{std::sqrt(1 - p) * pauli::identity(), std::sqrt(p) * pauli::z()}, 2, 1};
  CMatrix rho(2, 2);
  rho << 0.6, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.4;
  const CMatrix out = kraus_to_w(ch).apply(rho);
  CHECK(std::abs(out(0, 1) - (1 - 2 * p) * rho(0, 1)) < 1e-14);
  CHECK(std::abs(out(0, 0) - rho(0, 0)) < 1e-14);
}

TEST_CASE("random Stinespring channels satisfy the channel invariants", "[channels]") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int D = 1 + trial % 3;
    const int rank = std::min(1 + trial % 5, 4 * D * D);
    const auto ch = random_stinespring_channel(2, D, rank, rng);
    REQUIRE_NOTHROW(ch.validate());
    const auto w = kraus_to_w(ch);
    const auto diag = check_cptp(w);
    CHECK(diag.pass);
    CHECK(diag.tp_residual < 1e-9);
    CHECK(diag.cp_min_eigenvalue > -1e-9);
    // Hermiticity under prime swap with conjugation.
    const CMatrix s = w.superoperator();
    const CMatrix rho = random_density_matrix(2 * D, rng);
    const CMatrix out = apply_superoperator(s, rho);
    CHECK((out - out.adjoint()).norm() < 1e-12);
    CHECK((out - kraus_action(ch.ops, rho)).norm() < 1e-12);
  }
}

TEST_CASE("kraus_to_w rejects a non trace-preserving set", "[channels]") {
  KrausChannel ch{{1.1 * CMatrix::Identity(2, 2)}, 2, 1};
  CHECK_THROWS_AS(kraus_to_w(ch), InvariantError);
  KrausChannel empty{{}, 2, 1};
  CHECK_THROWS(empty.validate());
}

TEST_CASE("scaled channel fails the CPTP check by the expected amount", "[channels]") {
  KrausChannel ch{{CMatrix::Identity(4, 4)}, 2, 2};
  const ChannelTensor w(kraus_to_w(ch).w().scaled(1.01));
  const auto diag = check_cptp(w);
  CHECK_FALSE(diag.pass);
  CHECK_THAT(diag.tp_residual, WithinAbs(0.01 * 4, 1e-12));
}

TEST_CASE("lindblad generator basics", "[channels]") {
  LindbladSpec zero{CMatrix::Zero(2, 2), {}};
  CHECK(lindblad_superoperator(zero).norm() == 0.0);
  CHECK((matrix_exp(lindblad_superoperator(zero)) - CMatrix::Identity(4, 4)).norm() <
        1e-12);

  // Jump rates multiply 2 L rho L^dagger - {L^dagger L, rho}: sigma_z at rate
  // gamma / 2 gives d rho01 / dt = -2 gamma rho01.
  const double gamma = 0.7;
  LindbladSpec deph{CMatrix::Zero(2, 2), {{pauli::z(), gamma / 2}}};
  CMatrix rho(2, 2);
  rho << 0.5, 0.3, 0.3, 0.5;
  const CMatrix drho = apply_superoperator(lindblad_superoperator(deph), rho);
  CHECK_THAT(drho(0, 1).real(), WithinAbs(-2 * gamma * 0.3, 1e-14));
  CHECK_THAT(std::abs(drho(0, 0)), WithinAbs(0.0, 1e-14));

  LindbladSpec bad{pauli::lower(), {}};
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  LindbladSpec neg{pauli::z(), {{pauli::x(), -1.0}}};
  CHECK_THROWS_AS(neg.validate(), InvariantError);
}

TEST_CASE("decoupled XX environment relaxes to its steady state", "[channels]") {
  XXChainParams p;
  p.J = 0.0;
  p.Gamma = 1.0;
  p.n = 0.3;
  const auto spec = xx_chain_lindblad(p);
  const CMatrix s = matrix_exp(lindblad_superoperator(spec), 40.0);
  std::mt19937_64 rng(5);
  const CMatrix rho = kron(pauli::identity() / 2.0, random_density_matrix(2, rng));
  const CMatrix env = partial_trace_sys(apply_superoperator(s, rho), 2, 2);
  CHECK((env - xx_chain_env_steady_state(0.3)).norm() < 1e-12);
}

TEST_CASE("evolved Hermitian operators stay Hermitian", "[channels]") {
  XXChainParams p;
  p.Gamma = 2.0;
  p.n = 0.4;
  const CMatrix s = matrix_exp(lindblad_superoperator(xx_chain_lindblad(p)), 0.3);
  std::mt19937_64 rng(6);
  const CMatrix out = apply_superoperator(s, random_density_matrix(4, rng));
  CHECK((out - out.adjoint()).norm() < 1e-10);
}

TEST_CASE("superop_to_kraus recovers channels", "[channels]") {
  CHECK(superop_to_kraus(CMatrix::Identity(4, 4), 2, 1).ops.size() == 1);

  // Dephasing with gamma * Delta = 0.1 in the -2 gamma convention.
  LindbladSpec deph{CMatrix::Zero(2, 2), {{pauli::z(), 0.5}}};
  const CMatrix s = matrix_exp(lindblad_superoperator(deph), 0.1);
  const auto k = superop_to_kraus(s, 2, 1);
  CHECK(k.ops.size() == 2);
  CMatrix rho(2, 2);
  rho << 0.7, 0.2, 0.2, 0.3;
  const CMatrix out = kraus_action(k.ops, rho);
  CHECK_THAT(out(0, 1).real(), WithinAbs(0.2 * std::exp(-0.2), 1e-12));
  CHECK_THAT(out(1, 1).real(), WithinAbs(0.3, 1e-12));

  std::mt19937_64 rng(7);
  const CMatrix u = random_unitary(4, rng);
  const auto ku = superop_to_kraus(unitary_superoperator(u), 2, 2);
  REQUIRE(ku.ops.size() == 1);
  // Equal up to a global phase.
  const cplx ph = (ku.ops[0].adjoint() * u).trace() / 4.0;
  CHECK_THAT(std::abs(ph), WithinAbs(1.0, 1e-12));
  CHECK((ku.ops[0] * ph - u).norm() < 1e-10);

  CHECK_THROWS_AS(superop_to_kraus(1.1 * CMatrix::Identity(4, 4), 2, 1), InvariantError);
}

TEST_CASE("round trip through Kraus form preserves the action", "[channels]") {
  XXChainParams p;
  p.Gamma = 5.0;
  const auto model = xx_chain_model(p);
  CHECK(check_cptp(model.channel).pass);
  const CMatrix s = model.channel.superoperator();
  const auto k = superop_to_kraus(s, 2, 2);
  const auto w = kraus_to_w(k);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const CMatrix rho = random_density_matrix(4, rng);
    CHECK((w.apply(rho) - apply_superoperator(s, rho)).norm() < 1e-8);
  }
}
