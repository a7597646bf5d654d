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

#include <optional>
#include <vector>

#include "ptnm/channels.hpp"
#include "ptnm/measures.hpp"
#include "ptnm/process_tensor.hpp"

namespace ptnm {

//------------------------------------------------------------------------------
// Dissipative two-spin XX chain
//------------------------------------------------------------------------------

/// System spin coupled to one environment spin by
/// H = J (sx sx + sy sy); the environment spin is pumped toward
/// (1 - n)|0><0| + n|1><1| at rate 2 Gamma.
struct XXChainParams {
  double J = 1.0;
  double Gamma = 0.0;
  double n = 0.0;
  double Delta = 0.3;
  /// Initial system state; maximally mixed when unset.
  std::optional<CMatrix> rho0_system;

  void validate() const;
};

struct XXChainModel {
  LindbladSpec generator;
  KrausChannel kraus;
  ChannelTensor channel;
  CMatrix rho0;  // rho0_system (x) steady environment state
};

LindbladSpec xx_chain_lindblad(const XXChainParams& p);
XXChainModel xx_chain_model(const XXChainParams& p);

/// Environment steady state (1 - n)|0><0| + n|1><1|.
CMatrix xx_chain_env_steady_state(double n);

//------------------------------------------------------------------------------
// Dephasing models
//------------------------------------------------------------------------------

/// Single-qubit dephasing d rho/dt = gamma (sz rho sz - rho) over one step
/// Delta, with a trivial (D = 1) environment.
ChannelTensor ruqdm_channel(double gamma, double Delta);

/// Spin coupled to a continuous position environment through
/// H = (g / 2) sz (x) x, environment initially in a Lorentzian wave packet.
struct UQDMParams {
  double gamma = 1.0;
  double g = 1.0;
  double Delta = 0.1;
  int grid_points = 5000;
  /// Half-width of the position grid in units of gamma.
  double grid_halfwidth = 100.0;

  void validate() const;
};

struct UQDMModel {
  UQDMParams params;
  RVector x;        // grid points
  CVector psi;      // initial environment wave function, unit norm
  CVector phases;   // diagonal of U = exp(-i g Delta x / 2)
};

UQDMModel uqdm_model(const UQDMParams& p);

/// <psi| U^s |psi> for s = 0..max_shift.
CVector uqdm_overlaps(const UQDMModel& model, int max_shift);

/// Memory complexity C_j from the (j+1)-term binomial mixture of
/// U^m |psi>, evaluated through its weighted Gram matrix.
double uqdm_env_entropy(const UQDMModel& model, int j);

/// C_j for j = 0..j_max.
MeasureSeries uqdm_memory_series(const UQDMModel& model, int j_max);
MeasureSeries uqdm_memory_series(const UQDMParams& p, int j_max);

/// Dense unitary description (D = grid_points); only for small grids.
UnitaryModel uqdm_unitary_model(const UQDMModel& model, const CMatrix& rho0_system);

/// Channel tensor of the dense unitary (D = grid_points); small grids only.
ChannelTensor uqdm_channel(const UQDMModel& model);

/// System state after `steps` steps with optional unitary interventions;
/// interventions[m] (if set) acts right before step m + 1, and an entry at
/// index `steps` acts on the final state. Simulated through pure-state
/// trajectories, so the grid size is unrestricted.
CMatrix uqdm_system_state(const UQDMModel& model, const CMatrix& rho0_system,
                          int steps,
                          const std::vector<std::optional<CMatrix>>& interventions);

/// Binomial mixture weights C(j, l) / 2^j for l = 0..j (log-space for j > 60).
std::vector<double> binomial_weights(int j);

}  // namespace ptnm
