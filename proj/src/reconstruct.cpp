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

#include "ptnm/reconstruct.hpp"

#include <ceres/first_order_function.h>
#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <ceres/iteration_callback.h>

#include <cmath>
#include <limits>
#include <string>

#include "ptnm/detail/transfer.hpp"
#include "ptnm/operators.hpp"

namespace ptnm {

void ReconstructionAnsatz::validate(double norm_tol) const {
  if (d < 1 || env_dim < 1 || rank < 1) {
    throw DimensionError("ansatz dimensions must be positive");
  }
  const auto n2 = static_cast<int>(kraus_size());
  if (rank > n2) {
    throw DimensionError("Kraus rank " + std::to_string(rank) +
                         " exceeds (dD)^2 = " + std::to_string(n2));
  }
  if (a_bar.size() != static_cast<std::size_t>(rank) * kraus_size()) {
    throw DimensionError("a_bar has the wrong number of entries");
  }
  if (psi0.size() != d * env_dim) {
    throw DimensionError("psi0 must have dimension dD");
  }
  if (std::abs(psi0.norm() - 1.0) > norm_tol) {
    throw InvariantError("psi0 is not normalized");
  }
}

CMatrix ReconstructionAnsatz::kraus_operator(int s) const {
  const int n = d * env_dim;
  CMatrix a(n, n);
  const std::size_t off = static_cast<std::size_t>(s) * kraus_size();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      a(r, c) = a_bar[off + static_cast<std::size_t>(r * n + c)];
  return a;
}

std::vector<CMatrix> ReconstructionAnsatz::kraus_operators() const {
  std::vector<CMatrix> ops;
  ops.reserve(static_cast<std::size_t>(rank));
  for (int s = 0; s < rank; ++s) ops.push_back(kraus_operator(s));
  return ops;
}

ReconstructionAnsatz embed_channel(const KrausChannel& ch, const CVector& psi0,
                                   int rank) {
  if (static_cast<int>(ch.ops.size()) > rank) {
    throw DimensionError("channel has more Kraus operators than the rank");
  }
  ReconstructionAnsatz out;
  out.d = ch.d;
  out.env_dim = ch.env_dim;
  out.rank = rank;
  out.psi0 = psi0;
  out.a_bar.assign(static_cast<std::size_t>(rank) * out.kraus_size(), cplx{});
  const int n = ch.d * ch.env_dim;
  for (std::size_t s = 0; s < ch.ops.size(); ++s)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out.a_bar[s * out.kraus_size() + static_cast<std::size_t>(r * n + c)] =
            ch.ops[s](r, c);
  out.validate();
  return out;
}

ReconstructionAnsatz random_valid_ansatz(int d, int env_dim, int rank,
                                         std::mt19937_64& rng) {
  const KrausChannel ch = random_stinespring_channel(d, env_dim, rank, rng);
  std::normal_distribution<double> normal;
  CVector psi(d * env_dim);
  for (auto& z : psi) z = cplx{normal(rng), normal(rng)};
  psi.normalize();
  return embed_channel(ch, psi, rank);
}

ReconstructionAnsatz random_initial_ansatz(int d, int env_dim, int rank,
                                           std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ReconstructionAnsatz out;
  out.d = d;
  out.env_dim = env_dim;
  out.rank = rank;
  out.a_bar.resize(static_cast<std::size_t>(rank) * out.kraus_size());
  for (auto& z : out.a_bar) z = cplx{normal(rng), normal(rng)};
  out.psi0.resize(d * env_dim);
  for (auto& z : out.psi0) z = cplx{normal(rng), normal(rng)};
  out.psi0.normalize();
  // |W|_F is quartic in the entries; match the identity channel's norm dD.
  const double wn = kraus_to_superoperator(out.kraus_operators()).norm();
  const double scale = std::sqrt(static_cast<double>(d * env_dim) / wn);
  for (auto& z : out.a_bar) z *= scale;
  out.validate();
  return out;
}

ChannelTensor ansatz_channel(const ReconstructionAnsatz& ansatz) {
  return ChannelTensor::from_superoperator(
      kraus_to_superoperator(ansatz.kraus_operators()), ansatz.d,
      ansatz.env_dim);
}

ProcessTensorMPDO predict(const ReconstructionAnsatz& ansatz, int k) {
  if (k < 1) throw DimensionError("k must be at least 1");
  const ChannelTensor w = ansatz_channel(ansatz);
  return ProcessTensorMPDO::from_parts(ansatz.psi0 * ansatz.psi0.adjoint(),
                                       std::vector<ChannelTensor>(
                                           static_cast<std::size_t>(k), w));
}

namespace {

ProcessTensorMPDO target_prefix(const ProcessTensorMPDO& target, int k) {
  if (k > target.k()) {
    throw DimensionError("target has " + std::to_string(target.k()) +
                         " steps, fit needs " + std::to_string(k));
  }
  return k == target.k() ? target : target.prefix(k);
}

// The loss is a difference of overlaps that are each of order |Y|^2, so in
// double precision it bottoms out near 1e-16 |Y|^2 -- too coarse for line
// searches close to the optimum. Overlaps are therefore accumulated in
// extended precision; rounding of the (double) site tensors only enters the
// loss through its gradient and cancels to first order.
using xcplx = std::complex<long double>;
using XMatrix = Eigen::Matrix<xcplx, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<xcplx, Eigen::Dynamic, 1>;

struct ExtendedChain {
  int env_dim = 0;
  std::vector<XVector> rho0;
  std::vector<std::vector<XMatrix>> sites;
};

ExtendedChain extend(const ProcessTensorMPDO& pt) {
  ExtendedChain c;
  c.env_dim = pt.env_dim();
  for (const auto& v : detail::rho0_blocks(pt.rho0(), pt.d(), pt.env_dim())) {
    c.rho0.push_back(v.cast<xcplx>());
  }
  for (int m = 0; m < pt.k(); ++m) {
    std::vector<XMatrix> blocks;
    for (const auto& b : detail::site_blocks(pt.site(m))) {
      blocks.push_back(b.cast<xcplx>());
    }
    c.sites.push_back(std::move(blocks));
  }
  return c;
}

long double overlap(const ExtendedChain& a, const ExtendedChain& b) {
  XMatrix env = XMatrix::Zero(a.rho0.front().size(), b.rho0.front().size());
  for (std::size_t p = 0; p < a.rho0.size(); ++p) {
    env.noalias() += a.rho0[p].conjugate() * b.rho0[p].transpose();
  }
  XMatrix next;
  for (std::size_t m = 0; m < a.sites.size(); ++m) {
    next = XMatrix::Zero(a.sites[m].front().cols(), b.sites[m].front().cols());
    for (std::size_t p = 0; p < a.sites[m].size(); ++p) {
      next.noalias() += a.sites[m][p].adjoint() * (env * b.sites[m][p]);
    }
    env.swap(next);
  }
  xcplx acc{};
  for (int x = 0; x < a.env_dim; ++x)
    for (int y = 0; y < b.env_dim; ++y)
      acc += env(x * a.env_dim + x, y * b.env_dim + y);
  return acc.real();
}

double precise_loss(const ProcessTensorMPDO& p, const ExtendedChain& t,
                    long double tt) {
  const ExtendedChain pe = extend(p);
  return static_cast<double>(overlap(pe, pe) - 2.0L * overlap(pe, t) + tt);
}

// Target in extended form together with its self-overlap.
struct PreparedTarget {
  ProcessTensorMPDO pt;
  ExtendedChain ext;
  long double tt = 0.0L;
};

PreparedTarget prepare(const ProcessTensorMPDO& target, int k) {
  PreparedTarget t;
  t.pt = target_prefix(target, k);
  t.ext = extend(t.pt);
  t.tt = overlap(t.ext, t.ext);
  return t;
}

}  // namespace

double loss(const ReconstructionAnsatz& ansatz, const ProcessTensorMPDO& target,
            int k) {
  const PreparedTarget t = prepare(target, k);
  const ProcessTensorMPDO p = predict(ansatz, k);
  if (p.d() != t.pt.d()) throw DimensionError("system dimensions differ");
  return precise_loss(p, t.ext, t.tt);
}

namespace {

// sum_s A_s^dagger A_s - I
CMatrix tp_deviation(const ReconstructionAnsatz& ansatz) {
  const int n = ansatz.d * ansatz.env_dim;
  CMatrix k = -CMatrix::Identity(n, n);
  for (const auto& a : ansatz.kraus_operators()) k.noalias() += a.adjoint() * a;
  return k;
}

// Loss and gradient for a prepared target.
LossGradient loss_gradient_impl(const ReconstructionAnsatz& ansatz,
                                const PreparedTarget& target, double penalty) {
  const ProcessTensorMPDO& t = target.pt;
  const int d = ansatz.d;
  const int De = ansatz.env_dim;
  const int n = d * De;
  const int k = t.k();
  const ProcessTensorMPDO p = predict(ansatz, k);
  if (p.d() != t.d()) throw DimensionError("system dimensions differ");
  const auto pp = detail::pair_environments(p, p);
  const auto pt = detail::pair_environments(p, t);

  LossGradient out;
  out.loss = precise_loss(p, target.ext, target.tt);

  // dL/d conj(W) for every (i,i',o,o') block, summed over sites.
  const std::size_t nblocks = pp.blocks_a.front().size();
  std::vector<CMatrix> g(nblocks, CMatrix::Zero(De * De, De * De));
  for (int m = 0; m < k; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    for (std::size_t q = 0; q < nblocks; ++q) {
      g[q].noalias() += pp.left[mu] * pp.blocks_b[mu][q] *
                        pp.right[mu + 1].transpose();
      g[q].noalias() -= pt.left[mu] * pt.blocks_b[mu][q] *
                        pt.right[mu + 1].transpose();
    }
  }
  // Reorder into the Kraus-pair layout: u = (o beta) * n + (i alpha).
  const int n2 = n * n;
  CMatrix gc(n2, n2);
  std::size_t q = 0;
  for (int i = 0; i < d; ++i)
    for (int ip = 0; ip < d; ++ip)
      for (int o = 0; o < d; ++o)
        for (int op = 0; op < d; ++op, ++q)
          for (int a = 0; a < De; ++a)
            for (int ap = 0; ap < De; ++ap)
              for (int b = 0; b < De; ++b)
                for (int bp = 0; bp < De; ++bp) {
                  const int u = (o * De + b) * n + (i * De + a);
                  const int up = (op * De + bp) * n + (ip * De + ap);
                  gc(u, up) = g[q](a * De + ap, b * De + bp);
                }
  const CMatrix gh = gc + gc.adjoint();

  const std::vector<CMatrix> ops = ansatz.kraus_operators();
  CMatrix kdev;
  if (penalty != 0.0) {
    kdev = tp_deviation(ansatz);
    out.loss += penalty * kdev.squaredNorm();
  }

  const std::size_t ks = ansatz.kraus_size();
  out.d_re_a.resize(ansatz.a_bar.size());
  out.d_im_a.resize(ansatz.a_bar.size());
  for (int s = 0; s < ansatz.rank; ++s) {
    const auto off = static_cast<std::size_t>(s) * ks;
    const Eigen::Map<const CVector> a(ansatz.a_bar.data() + off,
                                      static_cast<Eigen::Index>(ks));
    CVector gs = gh * a;
    if (penalty != 0.0) {
      const CMatrix pk = 2.0 * penalty * ops[static_cast<std::size_t>(s)] * kdev;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) gs(r * n + c) += pk(r, c);
    }
    for (std::size_t j = 0; j < ks; ++j) {
      out.d_re_a[off + j] = 2.0 * gs(static_cast<Eigen::Index>(j)).real();
      out.d_im_a[off + j] = 2.0 * gs(static_cast<Eigen::Index>(j)).imag();
    }
  }

  // Initial state: dL/d conj(rho0) from the boundary contraction.
  CMatrix g0(n, n);
  for (int o = 0; o < d; ++o)
    for (int op = 0; op < d; ++op) {
      const auto b = static_cast<std::size_t>(o * d + op);
      const CVector col = pp.right[0] * pp.rho0_b[b] - pt.right[0] * pt.rho0_b[b];
      for (int a = 0; a < De; ++a)
        for (int ap = 0; ap < De; ++ap) g0(o * De + a, op * De + ap) = col(a * De + ap);
    }
  const CVector gpsi = (g0 + g0.adjoint()) * ansatz.psi0;
  out.d_re_psi.resize(static_cast<std::size_t>(n));
  out.d_im_psi.resize(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    out.d_re_psi[static_cast<std::size_t>(x)] = 2.0 * gpsi(x).real();
    out.d_im_psi[static_cast<std::size_t>(x)] = 2.0 * gpsi(x).imag();
  }
  return out;
}

}  // namespace

LossGradient loss_gradient(const ReconstructionAnsatz& ansatz,
                           const ProcessTensorMPDO& target, int k,
                           double penalty) {
  return loss_gradient_impl(ansatz, prepare(target, k), penalty);
}

double normalization_residual(const ReconstructionAnsatz& ansatz) {
  const CMatrix t = trace_preservation_matrix(ansatz_channel(ansatz));
  return (t - CMatrix::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff();
}

namespace {

// Parameters are interleaved (re, im) pairs: a_bar first, then the
// unnormalized initial vector phi, with psi0 = phi / |phi|.
std::vector<double> pack(const ReconstructionAnsatz& a) {
  std::vector<double> x;
  x.reserve(2 * (a.a_bar.size() + static_cast<std::size_t>(a.psi0.size())));
  for (const auto& z : a.a_bar) {
    x.push_back(z.real());
    x.push_back(z.imag());
  }
  for (const auto& z : a.psi0) {
    x.push_back(z.real());
    x.push_back(z.imag());
  }
  return x;
}

// Returns |phi| so callers can rescale psi-gradients.
double unpack(const double* x, ReconstructionAnsatz& a) {
  std::size_t j = 0;
  for (auto& z : a.a_bar) {
    z = cplx{x[j], x[j + 1]};
    j += 2;
  }
  for (auto& z : a.psi0) {
    z = cplx{x[j], x[j + 1]};
    j += 2;
  }
  const double r = a.psi0.norm();
  if (r > 0.0) a.psi0 /= r;
  return r;
}

class FitObjective final : public ceres::FirstOrderFunction {
 public:
  FitObjective(ReconstructionAnsatz shape, PreparedTarget target,
               double penalty)
      : shape_(std::move(shape)), target_(std::move(target)), penalty_(penalty) {}

  bool Evaluate(const double* x, double* cost,
                double* gradient) const override {
    ReconstructionAnsatz a = shape_;
    const double r = unpack(x, a);
    if (!(r > 0.0) || !std::isfinite(r)) return false;
    if (gradient == nullptr) {
      *cost = precise_loss(predict(a, target_.pt.k()), target_.ext, target_.tt);
      if (penalty_ != 0.0) *cost += penalty_ * tp_deviation(a).squaredNorm();
      return std::isfinite(*cost);
    }
    const LossGradient lg = loss_gradient_impl(a, target_, penalty_);
    *cost = lg.loss;
    std::size_t j = 0;
    for (std::size_t q = 0; q < lg.d_re_a.size(); ++q) {
      gradient[j++] = lg.d_re_a[q];
      gradient[j++] = lg.d_im_a[q];
    }
    // Project out the radial direction of phi.
    const auto np = static_cast<Eigen::Index>(lg.d_re_psi.size());
    CVector g(np);
    for (Eigen::Index q = 0; q < np; ++q) {
      g(q) = cplx{lg.d_re_psi[static_cast<std::size_t>(q)],
                  lg.d_im_psi[static_cast<std::size_t>(q)]};
    }
    const double radial = a.psi0.dot(g).real();  // Re <psi, g>
    const CVector gp = (g - radial * a.psi0) / r;
    for (Eigen::Index q = 0; q < np; ++q) {
      gradient[j++] = gp(q).real();
      gradient[j++] = gp(q).imag();
    }
    return std::isfinite(*cost);
  }

  int NumParameters() const override {
    return static_cast<int>(
        2 * (shape_.a_bar.size() + static_cast<std::size_t>(shape_.psi0.size())));
  }

 private:
  ReconstructionAnsatz shape_;
  PreparedTarget target_;
  double penalty_;
};

class StageMonitor final : public ceres::IterationCallback {
 public:
  StageMonitor(std::vector<double>& history, int window, double tol)
      : history_(history), window_(window), tol_(tol) {}

  ceres::CallbackReturnType operator()(
      const ceres::IterationSummary& summary) override {
    costs_.push_back(summary.cost);
    if (summary.iteration > 0) history_.push_back(summary.cost);
    const auto sz = costs_.size();
    if (window_ > 0 && sz > static_cast<std::size_t>(window_)) {
      const double before = costs_[sz - 1 - static_cast<std::size_t>(window_)];
      if (before - summary.cost < tol_) {
        return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
      }
    }
    return ceres::SOLVER_CONTINUE;
  }

 private:
  std::vector<double>& history_;
  std::vector<double> costs_;
  int window_;
  double tol_;
};

void check_config(const ProcessTensorMPDO& target, const FitConfig& c) {
  if (c.env_dim < 1 || c.rank < 1) {
    throw ConfigError("fit env_dim and rank must be positive");
  }
  if (c.k_schedule.empty()) throw ConfigError("k schedule is empty");
  int prev = 0;
  for (int k : c.k_schedule) {
    if (k <= prev) throw ConfigError("k schedule must be strictly increasing");
    prev = k;
  }
  if (prev > target.k()) {
    throw ConfigError("k schedule exceeds the target's " +
                      std::to_string(target.k()) + " steps");
  }
  if (c.max_iter < 1 || c.restarts < 1) {
    throw ConfigError("max_iter and restarts must be positive");
  }
  const int n = target.d() * c.env_dim;
  if (c.rank > n * n) throw ConfigError("Kraus rank exceeds (dD)^2");
}

}  // namespace

namespace {

struct StageOutcome {
  double loss = 0.0;
  int iterations = 0;
};

// One BFGS run on the k-step loss, updating x in place.
StageOutcome run_stage(const ProcessTensorMPDO& target, int k,
                       const ReconstructionAnsatz& shape, std::vector<double>& x,
                       const FitConfig& config, std::vector<double>& history) {
  ceres::GradientProblem problem(
      new FitObjective(shape, prepare(target, k), config.penalty));
  StageMonitor monitor(history, config.stall_window, config.stall_tol);
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::BFGS;
  opts.line_search_type = ceres::WOLFE;
  opts.max_num_iterations = config.max_iter;
  // Stages end through the stall rule or gtol; the relative cost and step
  // tests are kept out of the way.
  opts.function_tolerance = 1e-15;
  opts.gradient_tolerance = config.gtol;
  opts.parameter_tolerance = 1e-14;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;
  opts.callbacks.push_back(&monitor);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, x.data(), &summary);
  return {summary.final_cost, static_cast<int>(summary.iterations.size())};
}

FitResult finish(const ProcessTensorMPDO& target, const ReconstructionAnsatz& shape,
                 const std::vector<double>& x, FitReport rep,
                 const FitConfig& config) {
  FitResult result;
  result.ansatz = shape;
  unpack(x.data(), result.ansatz);
  rep.final_loss = loss(result.ansatz, target, config.k_schedule.back());
  rep.normalization_residual = normalization_residual(result.ansatz);
  rep.converged = rep.final_loss < config.ftol;
  result.report = std::move(rep);
  return result;
}

}  // namespace

FitResult fit_from(const ProcessTensorMPDO& target, ReconstructionAnsatz start,
                   const FitConfig& config) {
  check_config(target, config);
  start.validate(1e-8);
  FitReport rep;
  rep.k_schedule = config.k_schedule;
  std::vector<double> x = pack(start);
  for (int k : config.k_schedule) {
    const auto out = run_stage(target, k, start, x, config, rep.loss_history);
    rep.iterations += out.iterations;
    rep.stage_losses.push_back(out.loss);
  }
  return finish(target, start, x, std::move(rep), config);
}

FitResult fit(const ProcessTensorMPDO& target, const FitConfig& config) {
  check_config(target, config);
  if (config.first_stage_attempts < 1) {
    throw ConfigError("first_stage_attempts must be positive");
  }
  std::mt19937_64 rng(config.seed);
  FitResult best;
  std::vector<double> losses;
  const int k0 = config.k_schedule.front();
  for (int r = 0; r < config.restarts; ++r) {
    // Screen starting points on the first (cheapest) stage.
    FitReport rep;
    rep.k_schedule = config.k_schedule;
    ReconstructionAnsatz shape;
    std::vector<double> x;
    double first = std::numeric_limits<double>::infinity();
    for (int a = 0; a < config.first_stage_attempts; ++a) {
      ReconstructionAnsatz cand =
          random_valid_ansatz(target.d(), config.env_dim, config.rank, rng);
      std::vector<double> xc = pack(cand);
      std::vector<double> hist;
      const auto out = run_stage(target, k0, cand, xc, config, hist);
      rep.iterations += out.iterations;
      if (out.loss < first) {
        first = out.loss;
        shape = std::move(cand);
        x = std::move(xc);
        rep.loss_history = std::move(hist);
      }
      if (first < config.ftol) break;
    }
    rep.stage_losses.push_back(first);
    for (std::size_t s = 1; s < config.k_schedule.size(); ++s) {
      const auto out =
          run_stage(target, config.k_schedule[s], shape, x, config, rep.loss_history);
      rep.iterations += out.iterations;
      rep.stage_losses.push_back(out.loss);
    }
    FitResult res = finish(target, shape, x, std::move(rep), config);
    losses.push_back(res.report.final_loss);
    if (r == 0 || res.report.final_loss < best.report.final_loss) {
      best = std::move(res);
      best.report.best_restart = r;
    }
  }
  best.report.restart_losses = std::move(losses);
  return best;
}

}  // namespace ptnm
