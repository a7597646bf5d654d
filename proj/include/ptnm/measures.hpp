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
#include <string>
#include <vector>

#include "ptnm/process_tensor.hpp"

namespace ptnm {

// All entropies are reported in bits (log base 2).

/// Effective environment state after step j.
struct EnvState {
  CMatrix rho;
  int step = 0;
};

struct EnvStateOptions {
  /// Allowed deviation of each pre-normalization trace from its expected
  /// value. Exact models satisfy this to ~1e-12; variational fits only to
  /// roughly their normalization residual.
  double trace_tol = 1e-9;
};

EnvState env_state(const ProcessTensorMPDO& pt, int j,
                   const EnvStateOptions& opts = {});

/// Entropy of the effective environment state, 1 <= j <= k.
double nm_ee(const ProcessTensorMPDO& pt, int j,
             const EnvStateOptions& opts = {});

/// Where the OSEE bipartition is placed.
enum class OseeCut {
  /// Left block: o_0..o_j and i_0..i_{j-1} (cut between site j-1 and site j).
  kAfterOutput,
  /// Left block additionally holds the input pair (i_j, i_j').
  kAfterInput,
};

struct OseeOptions {
  OseeCut cut = OseeCut::kAfterOutput;
  /// Renyi order; std::nullopt selects von Neumann.
  std::optional<double> renyi_alpha;
};

/// Schmidt spectrum (squared, normalized) of the vectorized process tensor
/// across the cut at step j.
Spectrum osee_spectrum(const ProcessTensorMPDO& pt, int j,
                       const OseeOptions& opts = {});

/// Half the operator-space entanglement entropy at step j, 1 <= j < k.
double osee(const ProcessTensorMPDO& pt, int j, const OseeOptions& opts = {});

/// A unitary system-environment model: one global unitary per step.
struct UnitaryModel {
  CMatrix unitary;  // (dD x dD), system index slow
  CMatrix rho0;     // (dD x dD)
  int d = 2;
  int env_dim = 1;
};

/// Memory complexity: entropy of the environment state of a unitary model,
/// computed from the environment Kraus blocks <a|U|b> of the unitary.
double memory_complexity(const UnitaryModel& model, int j);

enum class MeasureKind { kOsee, kEe, kMemoryComplexity };

std::string to_string(MeasureKind kind);

struct MeasureSeries {
  MeasureKind kind = MeasureKind::kEe;
  std::vector<int> steps;
  std::vector<double> values;
  std::vector<bool> boundary_flagged;
};

struct SeriesOptions {
  /// OSEE points with j > k - margin are flagged; default k / 5.
  std::optional<int> boundary_margin;
  OseeOptions osee;
  EnvStateOptions env;
};

/// Sweeps j over 1..k-1 (osee) or 1..k (ee).
MeasureSeries measure_series(const ProcessTensorMPDO& pt, MeasureKind kind,
                             const SeriesOptions& opts = {});

}  // namespace ptnm
