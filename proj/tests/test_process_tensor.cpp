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

#include <random>

#include "oracles.hpp"
#include "ptnm/channels.hpp"
#include "ptnm/models.hpp"
#include "ptnm/operators.hpp"
#include "ptnm/process_tensor.hpp"

using namespace ptnm;

namespace {

ProcessTensorMPDO random_model(int d, int env, int rank, int k, std::mt19937_64& rng) {
  const auto ch = kraus_to_w(random_stinespring_channel(d, env, rank, rng));
  return ProcessTensorMPDO::build(ch, random_density_matrix(d * env, rng), k);
}

CMatrix random_operation(int d, std::mt19937_64& rng) {
  return kraus_to_superoperator(random_stinespring_channel(d, 1, 2, rng).ops);
}

ProcessTensorMPDO xx_model(int k) {
  XXChainParams p;
  p.Gamma = 5.0;
  return ProcessTensorMPDO::build(xx_chain_model(p).channel, xx_chain_model(p).rho0, k);
}

CMatrix projector0() {
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("build validates its inputs", "[process_tensor]") {
  const auto ch = ruqdm_channel(1.0, 0.1);
  CHECK_THROWS_AS(ProcessTensorMPDO::build(ch, CMatrix::Identity(2, 2), 3),
                  InvariantError);
  CHECK_THROWS_AS(ProcessTensorMPDO::build(ch, CMatrix::Identity(4, 4) / 4.0, 3),
                  DimensionError);
  auto scaled = ch.w();
  for (auto& x : scaled.data()) x *= 1.1;
  CHECK_THROWS(ProcessTensorMPDO::build(ChannelTensor(scaled), projector0(), 3));
}

TEST_CASE("one identity step applies the intervention to the system marginal",
          "[process_tensor]") {
  std::mt19937_64 rng(3);
  const CMatrix rho_s = random_density_matrix(2, rng);
  const CMatrix rho_e = random_density_matrix(2, rng);
  KrausChannel id{{CMatrix::Identity(4, 4)}, 2, 2};
  const auto pt = ProcessTensorMPDO::build(kraus_to_w(id), kron(rho_s, rho_e), 1);
  const CMatrix lambda = random_operation(2, rng);
  const CMatrix out = apply(pt, {{lambda}, std::nullopt});
  CHECK((out - apply_superoperator(lambda, rho_s)).norm() < 1e-12);
}

TEST_CASE("identity interventions reproduce direct unitary evolution",
          "[process_tensor]") {
  std::mt19937_64 rng(5);
  const CMatrix u = random_unitary(4, rng);
  const CMatrix rho0 = random_density_matrix(4, rng);
  const int k = 4;
  const auto pt = ProcessTensorMPDO::build(kraus_to_w({{u}, 2, 2}), rho0, k);
  OperationSequence seq;
  seq.ops.assign(k, intervention::identity(2));
  CMatrix evolved = rho0;
  for (int m = 0; m < k; ++m) evolved = u * evolved * u.adjoint();
  CHECK((apply(pt, seq) - partial_trace_env(evolved, 2, 2)).norm() < 1e-12);
}

TEST_CASE("a memoryless model composes its local maps", "[process_tensor]") {
  std::mt19937_64 rng(9);
  const auto ch = ruqdm_channel(0.7, 0.2);
  const CMatrix rho0 = random_density_matrix(2, rng);
  const int k = 5;
  const auto pt = ProcessTensorMPDO::build(ch, rho0, k);
  OperationSequence seq;
  CMatrix chain = rho0;
  for (int m = 0; m < k; ++m) {
    seq.ops.push_back(random_operation(2, rng));
    chain = ch.apply(apply_superoperator(seq.ops.back(), chain));
  }
  CHECK((apply(pt, seq) - chain).norm() < 1e-10);
}

TEST_CASE("apply agrees with the dense process tensor", "[process_tensor]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const auto pt = random_model(2, 2, 3, 3, rng);
    OperationSequence seq;
    for (int m = 0; m < 3; ++m) seq.ops.push_back(random_operation(2, rng));
    const auto choi = materialize(pt);
    const CMatrix dense = oracle::choi_apply(choi, seq.ops);
    CHECK((apply(pt, seq) - dense).norm() < 1e-10);

    seq.final_measurement = random_density_matrix(2, rng);
    const double expected = (*seq.final_measurement * dense).trace().real();
    CHECK(std::abs(expectation(pt, seq) - expected) < 1e-10);
  }
}

TEST_CASE("trace-preserving interventions give unit total probability",
          "[process_tensor]") {
  std::mt19937_64 rng(13);
  const auto pt = xx_model(4);
  OperationSequence seq;
  for (int m = 0; m < 4; ++m) seq.ops.push_back(random_operation(2, rng));
  seq.final_measurement = CMatrix::Identity(2, 2);
  CHECK(std::abs(expectation(pt, seq) - 1.0) < 1e-12);

  // A shorter sequence measures at an earlier step.
  seq.ops.resize(2);
  CHECK(std::abs(expectation(pt, seq) - 1.0) < 1e-12);
  CHECK_THROWS(apply(pt, seq));
}

TEST_CASE("measure-and-prepare interventions are non-trace-preserving",
          "[process_tensor]") {
  std::mt19937_64 rng(15);
  const auto pt = random_model(2, 2, 2, 2, rng);
  const CMatrix p0 = projector0();
  const CMatrix p1 = CMatrix::Identity(2, 2) - p0;
  OperationSequence a{{intervention::measure_prepare(p0, p0), intervention::identity(2)},
                      CMatrix::Identity(2, 2)};
  OperationSequence b{{intervention::measure_prepare(p1, p0), intervention::identity(2)},
                      CMatrix::Identity(2, 2)};
  const double pa = expectation(pt, a);
  const double pb = expectation(pt, b);
  CHECK(pa > 0.0);
  CHECK(pb > 0.0);
  CHECK(std::abs(pa + pb - 1.0) < 1e-12);
}

TEST_CASE("sequence validation rejects non-CP operations", "[process_tensor]") {
  OperationSequence seq{{intervention::identity(2)}, std::nullopt};
  CHECK_NOTHROW(seq.validate(2));
  CMatrix transpose = CMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) transpose(a * 2 + b, b * 2 + a) = 1.0;
  seq.ops.push_back(transpose);
  CHECK_THROWS(seq.validate(2));
}

TEST_CASE("averaged local expectations", "[process_tensor]") {
  std::mt19937_64 rng(17);
  const auto pt = random_model(2, 2, 4, 4, rng);
  for (int j = 1; j <= 4; ++j) {
    CHECK(std::abs(local_expectation_averaged(pt, CMatrix::Identity(2, 2), j) - 2.0) <
          1e-12);
  }
  const CMatrix m = random_density_matrix(2, rng);
  const CMatrix sys0 = partial_trace_env(pt.rho0(), 2, 2);
  CHECK(std::abs(expectation_do_nothing(pt, m, 0) - (m * sys0).trace().real()) < 1e-12);

  OperationSequence seq;
  seq.ops.assign(3, intervention::identity(2));
  seq.final_measurement = m;
  CHECK(std::abs(expectation_do_nothing(pt, m, 3) - expectation(pt, seq)) < 1e-12);
}

TEST_CASE("effective environment recursion matches the full history sum",
          "[process_tensor]") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pt = random_model(2, 2, 1 + trial, 4, rng);
    for (int j = 0; j <= 4; ++j) {
      const auto rec = effective_environment(pt, j);
      CHECK((rec.rho - oracle::direct_env_state(pt, j)).norm() < 1e-10);
      CHECK(rec.max_trace_deviation < 1e-12);
    }
  }
}

TEST_CASE("the initial environment state is the environment marginal",
          "[process_tensor]") {
  std::mt19937_64 rng(21);
  const CMatrix rho_e = random_density_matrix(2, rng);
  const auto ch = kraus_to_w(random_stinespring_channel(2, 2, 2, rng));
  const auto pt = ProcessTensorMPDO::build(ch, kron(projector0(), rho_e), 2);
  CHECK((effective_environment(pt, 0).rho - rho_e).norm() < 1e-14);
}

TEST_CASE("materialization of a single identity step", "[process_tensor]") {
  std::mt19937_64 rng(23);
  const CMatrix rho_s = random_density_matrix(2, rng);
  const auto pt = ProcessTensorMPDO::build(kraus_to_w({{CMatrix::Identity(2, 2)}, 2, 1}),
                                           rho_s, 1);
  const auto choi = materialize(pt);
  // Upsilon(o0, o0', i0, i0', o1, o1') = rho(o0, o0') delta(i0, o1) delta(i0', o1').
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t ap = 0; ap < 2; ++ap)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t ip = 0; ip < 2; ++ip)
          for (std::size_t o = 0; o < 2; ++o)
            for (std::size_t op = 0; op < 2; ++op) {
              const cplx expected = (i == o && ip == op)
                                        ? rho_s(static_cast<Eigen::Index>(a),
                                                static_cast<Eigen::Index>(ap))
                                        : cplx{};
              CHECK(std::abs(choi.tensor.at({a, ap, i, ip, o, op}) - expected) < 1e-14);
            }
}

TEST_CASE("the dense process tensor is positive", "[process_tensor]") {
  std::mt19937_64 rng(25);
  const auto pt = random_model(2, 2, 3, 3, rng);
  const auto eig = eig_hermitian(materialize(pt).matrix(), 1e-9);
  CHECK(eig.spectrum.values.back() > -1e-9);
}

TEST_CASE("materialization is guarded", "[process_tensor]") {
  const auto pt = xx_model(5);
  CHECK_THROWS_AS(materialize(pt), ResourceGuardError);
  CHECK_NOTHROW(materialize(pt.prefix(4)));
}

TEST_CASE("containment holds for built models", "[process_tensor]") {
  std::mt19937_64 rng(27);
  for (int k = 2; k <= 4; ++k) {
    const auto xx = check_containment(xx_model(k));
    CHECK(xx.pass);
    CHECK(xx.residual < 1e-9);
    CHECK(check_containment(random_model(2, 2, 4, k, rng)).residual < 1e-9);
    CHECK(check_containment(ProcessTensorMPDO::build(ruqdm_channel(1.0, 0.1),
                                                     projector0(), k))
              .pass);
  }
}

TEST_CASE("containment detects a normalization violation", "[process_tensor]") {
  const auto id = kraus_to_w({{CMatrix::Identity(2, 2)}, 2, 1});
  auto w = id.w();
  for (auto& x : w.data()) x *= 1.0 + 1e-3;
  const auto pt = ProcessTensorMPDO::from_parts(projector0(), {id, ChannelTensor(w)});
  const auto report = check_containment(pt);
  CHECK_FALSE(report.pass);
  CHECK(std::abs(report.residual - 1e-3) < 1e-9);
}

TEST_CASE("inner product agrees with the dense contraction", "[process_tensor]") {
  std::mt19937_64 rng(29);
  for (int k = 1; k <= 3; ++k) {
    const auto a = random_model(2, 2, 3, k, rng);
    const auto b = random_model(2, 3, 2, k, rng);
    const cplx ab = inner_product(a, b);
    const cplx dense = oracle::dense_inner(materialize(a), materialize(b));
    CHECK(std::abs(ab - dense) < 1e-9 * std::abs(dense));
    CHECK(std::abs(inner_product(b, a) - std::conj(ab)) < 1e-12);
    CHECK(inner_product(a, a).real() > 0.0);
  }
}

TEST_CASE("environment gauge leaves the process tensor unchanged", "[process_tensor]") {
  std::mt19937_64 rng(31);
  const auto pt = xx_model(3);
  const auto same = gauge_transform_env(pt, CMatrix::Identity(2, 2));
  CHECK(max_abs_difference(materialize(pt).tensor, materialize(same).tensor) < 1e-14);

  const CMatrix u = random_unitary(2, rng);
  const auto moved = gauge_transform_env(pt, u);
  CHECK(max_abs_difference(materialize(pt).tensor, materialize(moved).tensor) < 1e-10);
  const auto s0 = eig_hermitian(effective_environment(pt, 2).rho).spectrum.values;
  const auto s1 = eig_hermitian(effective_environment(moved, 2).rho).spectrum.values;
  for (std::size_t n = 0; n < s0.size(); ++n) CHECK(std::abs(s0[n] - s1[n]) < 1e-10);

  CHECK_THROWS_AS(gauge_transform_env(pt, 2.0 * CMatrix::Identity(2, 2)), InvariantError);
}
