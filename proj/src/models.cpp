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

#include "ptnm/models.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ptnm {

//------------------------------------------------------------------------------
// XX chain
//------------------------------------------------------------------------------

void XXChainParams::validate() const {
  if (!(n >= 0.0 && n <= 1.0)) throw std::invalid_argument("n must lie in [0, 1]");
  if (!(Gamma >= 0.0)) throw std::invalid_argument("Gamma must be >= 0");
  if (!(Delta > 0.0)) throw std::invalid_argument("Delta must be > 0");
  if (rho0_system && (rho0_system->rows() != 2 || rho0_system->cols() != 2)) {
    throw DimensionError("XX-chain system state must be 2 x 2");
  }
  if (rho0_system) {
    if (!is_hermitian(*rho0_system, 1e-10) ||
        std::abs(rho0_system->trace() - 1.0) > 1e-10) {
      throw InvariantError("XX-chain system state must be Hermitian with unit trace");
    }
    density_spectrum(*rho0_system);  // throws on negative eigenvalues
  }
}

CMatrix xx_chain_env_steady_state(double n) {
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 1.0 - n;
  rho(1, 1) = n;
  return rho;
}

LindbladSpec xx_chain_lindblad(const XXChainParams& p) {
  p.validate();
  const CMatrix id = pauli::identity();
  LindbladSpec spec;
  spec.hamiltonian =
      p.J * (kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()));
  spec.jumps.push_back({kron(id, pauli::lower()), p.Gamma * (1.0 - p.n)});
  spec.jumps.push_back({kron(id, pauli::raise()), p.Gamma * p.n});
  return spec;
}

XXChainModel xx_chain_model(const XXChainParams& p) {
  XXChainModel model;
  model.generator = xx_chain_lindblad(p);
  const CMatrix s = matrix_exp(lindblad_superoperator(model.generator), p.Delta);
  model.kraus = superop_to_kraus(s, 2, 2);
  model.channel = kraus_to_w(model.kraus);
  const CMatrix rho_s =
      p.rho0_system.value_or(CMatrix(0.5 * CMatrix::Identity(2, 2)));
  model.rho0 = kron(rho_s, xx_chain_env_steady_state(p.n));
  return model;
}

//------------------------------------------------------------------------------
// dephasing
//------------------------------------------------------------------------------

ChannelTensor ruqdm_channel(double gamma, double Delta) {
  if (!(gamma >= 0.0) || !(Delta > 0.0)) {
    throw std::invalid_argument("RUQDM needs gamma >= 0 and Delta > 0");
  }
  const CMatrix generator =
      gamma * (kron(pauli::z(), pauli::z()) - CMatrix::Identity(4, 4));
  const CMatrix s = matrix_exp(generator, Delta);
  return kraus_to_w(superop_to_kraus(s, 2, 1));
}

void UQDMParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("UQDM gamma must be > 0");
  if (!(Delta > 0.0)) throw std::invalid_argument("UQDM Delta must be > 0");
  if (grid_points < 2) throw std::invalid_argument("UQDM grid needs >= 2 points");
  if (!(grid_halfwidth > 0.0)) {
    throw std::invalid_argument("UQDM grid half-width must be > 0");
  }
}

UQDMModel uqdm_model(const UQDMParams& p) {
  p.validate();
  UQDMModel model;
  model.params = p;
  const int n = p.grid_points;
  const double half = p.grid_halfwidth * p.gamma;
  model.x = RVector::LinSpaced(n, -half, half);
  model.psi.resize(n);
  model.phases.resize(n);
  const double amp = std::sqrt(p.gamma / std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    model.psi(i) = amp / cplx(model.x(i), p.gamma);
    model.phases(i) = std::exp(cplx(0.0, -0.5 * p.g * p.Delta * model.x(i)));
  }
  model.psi /= model.psi.norm();
  return model;
}

CVector uqdm_overlaps(const UQDMModel& model, int max_shift) {
  const auto n = model.psi.size();
  CVector out(max_shift + 1);
  CVector power = CVector::Ones(n);
  RVector prob = model.psi.cwiseAbs2();
  for (int s = 0; s <= max_shift; ++s) {
    out(s) = (prob.cast<cplx>().array() * power.array()).sum();
    power = power.cwiseProduct(model.phases);
  }
  return out;
}

std::vector<double> binomial_weights(int j) {
  std::vector<double> w(static_cast<std::size_t>(j + 1));
  if (j <= 60) {
    double c = 1.0;  // C(j, l), exact in double for j <= 60
    const double scale = std::ldexp(1.0, -j);
    for (int l = 0; l <= j; ++l) {
      w[static_cast<std::size_t>(l)] = c * scale;
      c = c * (j - l) / (l + 1);
    }
  } else {
    const double lj = std::lgamma(j + 1.0) - j * std::log(2.0);
    for (int l = 0; l <= j; ++l) {
      w[static_cast<std::size_t>(l)] =
          std::exp(lj - std::lgamma(l + 1.0) - std::lgamma(j - l + 1.0));
    }
  }
  return w;
}

namespace {

// Entropy of sum_l w_l |U^{2l - j} psi><...| from overlaps c(s) = <psi|U^s|psi>.
double mixture_entropy(const CVector& overlaps, int j) {
  if (j == 0) return 0.0;
  const auto w = binomial_weights(j);
  const int r = j + 1;
  CMatrix m(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      // <psi_a|psi_b> with psi_l = U^{2l - j} psi.
      const int shift = 2 * (b - a);
      const cplx g = shift >= 0 ? overlaps(shift) : std::conj(overlaps(-shift));
      m(a, b) = std::sqrt(w[static_cast<std::size_t>(a)] *
                          w[static_cast<std::size_t>(b)]) * g;
    }
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  Spectrum spectrum;
  for (Eigen::Index i = r; i-- > 0;) {
    spectrum.values.push_back(std::max(es.eigenvalues()(i), 0.0));
  }
  return von_neumann_entropy(spectrum, 1e-9);
}

}  // namespace

double uqdm_env_entropy(const UQDMModel& model, int j) {
  if (j < 0) throw std::out_of_range("uqdm_env_entropy: j must be >= 0");
  return mixture_entropy(uqdm_overlaps(model, 2 * j), j);
}

MeasureSeries uqdm_memory_series(const UQDMModel& model, int j_max) {
  if (j_max < 1) throw std::invalid_argument("uqdm_memory_series: j_max >= 1");
  const CVector overlaps = uqdm_overlaps(model, 2 * j_max);
  MeasureSeries series;
  series.kind = MeasureKind::kMemoryComplexity;
  for (int j = 0; j <= j_max; ++j) {
    series.steps.push_back(j);
    series.values.push_back(mixture_entropy(overlaps, j));
    series.boundary_flagged.push_back(false);
  }
  return series;
}

MeasureSeries uqdm_memory_series(const UQDMParams& p, int j_max) {
  return uqdm_memory_series(uqdm_model(p), j_max);
}

UnitaryModel uqdm_unitary_model(const UQDMModel& model,
                                const CMatrix& rho0_system) {
  const auto n = model.psi.size();
  UnitaryModel um;
  um.d = 2;
  um.env_dim = static_cast<int>(n);
  um.unitary = CMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    um.unitary(i, i) = model.phases(i);
    um.unitary(n + i, n + i) = std::conj(model.phases(i));
  }
  um.rho0 = kron(rho0_system, model.psi * model.psi.adjoint());
  return um;
}

ChannelTensor uqdm_channel(const UQDMModel& model) {
  const auto um = uqdm_unitary_model(model, CMatrix::Identity(2, 2) / 2.0);
  KrausChannel ch;
  ch.d = 2;
  ch.env_dim = um.env_dim;
  ch.ops = {um.unitary};
  return kraus_to_w(ch);
}

CMatrix uqdm_system_state(const UQDMModel& model, const CMatrix& rho0_system,
                          int steps,
                          const std::vector<std::optional<CMatrix>>& interventions) {
  if (rho0_system.rows() != 2 || rho0_system.cols() != 2) {
    throw DimensionError("UQDM system state must be 2 x 2");
  }
  for (const auto& v : interventions) {
    if (v && !is_unitary(*v, 1e-10)) {
      throw InvariantError("UQDM trajectories need unitary interventions");
    }
  }
  auto intervention_at = [&](int m) -> const std::optional<CMatrix>* {
    if (m < static_cast<int>(interventions.size()) && interventions[m]) {
      return &interventions[m];
    }
    return nullptr;
  };
  const auto eig = eig_hermitian(rho0_system);
  CMatrix out = CMatrix::Zero(2, 2);
  for (int e = 0; e < 2; ++e) {
    const double weight = eig.spectrum.values[static_cast<std::size_t>(e)];
    if (weight <= 0.0) continue;
    // Components of the joint pure state: comp[s] = <s|_S |Psi>.
    std::array<CVector, 2> comp = {eig.vectors(0, e) * model.psi,
                                   eig.vectors(1, e) * model.psi};
    for (int m = 0; m < steps; ++m) {
      if (const auto* v = intervention_at(m)) {
        const CMatrix& u = **v;
        std::array<CVector, 2> mixed = {u(0, 0) * comp[0] + u(0, 1) * comp[1],
                                        u(1, 0) * comp[0] + u(1, 1) * comp[1]};
        comp = std::move(mixed);
      }
      comp[0] = comp[0].cwiseProduct(model.phases);
      comp[1] = comp[1].cwiseProduct(model.phases.conjugate());
    }
    if (const auto* v = intervention_at(steps)) {
      const CMatrix& u = **v;
      std::array<CVector, 2> mixed = {u(0, 0) * comp[0] + u(0, 1) * comp[1],
                                      u(1, 0) * comp[0] + u(1, 1) * comp[1]};
      comp = std::move(mixed);
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out(a, b) += weight * comp[b].dot(comp[a]);
  }
  return out;
}

}  // namespace ptnm
