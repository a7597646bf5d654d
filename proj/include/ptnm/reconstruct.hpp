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

#include <cstdint>
#include <random>
#include <vector>

#include "ptnm/channels.hpp"
#include "ptnm/process_tensor.hpp"

namespace ptnm {

/// Variational hidden-Markov model: one parametric Kraus tensor
/// a_bar(s, o, beta, i, alpha) shared by every step and a pure
/// system-environment initial state psi0.
struct ReconstructionAnsatz {
  int d = 2;
  int env_dim = 2;
  int rank = 1;  // R, number of Kraus operators
  /// Row-major over (s, o, beta, i, alpha): block s is the Kraus operator
  /// A_s((o beta), (i alpha)).
  std::vector<cplx> a_bar;
  CVector psi0;

  std::size_t kraus_size() const {
    return static_cast<std::size_t>(d * env_dim) * static_cast<std::size_t>(d * env_dim);
  }
  /// Throws unless the shapes agree, R <= (dD)^2 and |psi0| = 1.
  void validate(double norm_tol = 1e-10) const;

  CMatrix kraus_operator(int s) const;
  std::vector<CMatrix> kraus_operators() const;
};

/// Embeds a known channel (padded with zero Kraus operators up to `rank`)
/// and initial vector into an ansatz.
ReconstructionAnsatz embed_channel(const KrausChannel& ch, const CVector& psi0,
                                   int rank);

/// Random ansatz generated from a random Stinespring channel and a random
/// pure state; satisfies trace preservation exactly.
ReconstructionAnsatz random_valid_ansatz(int d, int env_dim, int rank,
                                         std::mt19937_64& rng);

/// Complex Gaussian Kraus entries scaled so that |W|_F matches the identity
/// channel; psi0 uniform on the unit sphere. Not trace preserving.
ReconstructionAnsatz random_initial_ansatz(int d, int env_dim, int rank,
                                           std::mt19937_64& rng);

/// Channel tensor of the ansatz, W = sum_s A_s (x) conj(A_s).
ChannelTensor ansatz_channel(const ReconstructionAnsatz& ansatz);

/// Predicted k-step process tensor; normalization is not enforced.
ProcessTensorMPDO predict(const ReconstructionAnsatz& ansatz, int k);

/// Squared Frobenius distance between predicted and target k-step process
/// tensors (target truncated to k steps).
double loss(const ReconstructionAnsatz& ansatz, const ProcessTensorMPDO& target,
            int k);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> d_re_a;
  std::vector<double> d_im_a;
  std::vector<double> d_re_psi;
  std::vector<double> d_im_psi;
};

/// Loss and its exact gradient with respect to the real and imaginary
/// parts of a_bar and psi0 (psi0 treated as unconstrained). A nonzero
/// `penalty` adds penalty * |sum_s A_s^dagger A_s - I|_F^2.
LossGradient loss_gradient(const ReconstructionAnsatz& ansatz,
                           const ProcessTensorMPDO& target, int k,
                           double penalty = 0.0);

/// max |sum_{o,beta} W(i,i',o,o,alpha,alpha',beta,beta) - delta delta|.
double normalization_residual(const ReconstructionAnsatz& ansatz);

struct FitConfig {
  int env_dim = 2;
  int rank = 16;
  std::vector<int> k_schedule = {2, 3, 4, 5, 6};
  /// Iteration budget per k stage.
  int max_iter = 10000;
  /// Gradient infinity-norm tolerance of the optimizer.
  double gtol = 1e-8;
  /// Loss below which a fit counts as converged.
  double ftol = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 5;
  /// A stage ends when the loss improves by less than stall_tol over
  /// stall_window iterations.
  int stall_window = 50;
  double stall_tol = 1e-10;
  /// Weight of the optional trace-preservation penalty.
  double penalty = 0.0;
  /// Fresh starting points tried per restart on the first k stage; the
  /// first one reaching ftol (else the best) continues.
  int first_stage_attempts = 3;
};

struct FitReport {
  double final_loss = 0.0;
  /// Loss after every accepted optimizer step, all stages concatenated.
  std::vector<double> loss_history;
  std::vector<int> k_schedule;
  /// Final loss of each stage, aligned with k_schedule.
  std::vector<double> stage_losses;
  double normalization_residual = 0.0;
  int iterations = 0;
  /// final_loss < ftol.
  bool converged = false;
  /// Restart that produced the reported ansatz, and every restart's loss.
  int best_restart = 0;
  std::vector<double> restart_losses;
};

struct FitResult {
  ReconstructionAnsatz ansatz;
  FitReport report;
};

/// Minimizes the loss with BFGS over a growing k schedule, warm-starting
/// each stage from the previous one; keeps the best of `restarts` runs.
/// Starting points are random trace-preserving ansatzes. Non-convergence is
/// reported, never thrown.
FitResult fit(const ProcessTensorMPDO& target, const FitConfig& config);

/// Single optimization run from a given starting point.
FitResult fit_from(const ProcessTensorMPDO& target, ReconstructionAnsatz start,
                   const FitConfig& config);

}  // namespace ptnm
