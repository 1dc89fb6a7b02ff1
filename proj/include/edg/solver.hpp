#pragma once

#include "edg/basis.hpp"
#include "edg/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace edg {

/// Low-rank candidate factor: the Gram candidate is P P^T.
struct GramFactor {
  Matrix p;  // n x q

  Index n() const { return p.rows(); }
  Index q() const { return p.cols(); }
};

/// Which stopping condition the outer loop applies.
///  - kReconciled (default): relative total-energy change < tol, and for
///    the constrained solver additionally a relative residual below tol
///    (feasibility < (penalty/2) tol^2 ||b||^2). The absolute thresholds
///    of kBox are scale-dependent, which is why this is the default.
///  - kBox: feasibility < tol and total energy < tol (absolute).
///  - kRelativeEnergy: relative total-energy change < tol only.
enum class StopRule { kReconciled, kBox, kRelativeEnergy };

struct SolverConfig {
  int q = 10;                    // factor width; a rough rank guess is enough
  double penalty = 1.0;          // quadratic penalty weight of the exact solver
  std::optional<double> lambda;  // noisy-path weight; empty = 100 * (m/L)
  double tol = 1e-5;
  int max_outer = 100;
  int bb_inner = 100;
  std::uint64_t seed = 0;
  double init_scale = 1.0;       // P0 entries iid uniform on [0, init_scale)
  StopRule stop_rule = StopRule::kReconciled;
  double divergence_factor = 1e6;

  void validate() const;
};

struct EnergyPoint {
  double total = 0.0;        // full objective value after the outer step
  double feasibility = 0.0;  // quadratic data-fit part, always >= 0
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  std::string status;
  std::vector<EnergyPoint> energy_trace;
  double wall_time = 0.0;  // seconds
  GramMatrix final_gram;
  double resolved_lambda = 0.0;             // noisy path only
  std::optional<double> relative_error;     // filled in when truth is known
};

/// Objective Tr(P P^T) + (weight/2) ||A(P P^T) - target||^2 shared by both
/// solvers: the exact path folds the running multiplier into target.
struct FactoredObjective {
  const ObservationSet* obs = nullptr;
  Vector target;
  double weight = 1.0;

  double value(const Matrix& p) const {
    return p.squaredNorm() +
           0.5 * weight * (measure_factored(p, *obs) - target).squaredNorm();
  }
  Matrix grad(const Matrix& p) const {
    const Vector resid = measure_factored(p, *obs) - target;
    return 2.0 * p + 2.0 * weight * measure_adjoint_apply(resid, *obs, p);
  }
};

struct BbResult {
  Matrix p;
  int steps = 0;
  double grad_norm = 0.0;
  bool finite = true;
};

/// Barzilai-Borwein descent: spectral step ss/sy with fallback 1e-4 when
/// the curvature estimate sy is not positive, first step 1/||g0||, steps
/// clamped to [1e-10, 1e6]. A nonmonotone watchdog (objective compared
/// against the largest of the last 10 accepted values) halves a trial
/// step that would blow the energy up; plain spectral steps pass it
/// untouched. Stops after max_steps or once ||g|| < tol * max(1, ||P||_F).
template <class Oracle>
BbResult bb_descent(const Oracle& oracle, Matrix p, int max_steps,
                    double tol) {
  BbResult res;
  Matrix g = oracle.grad(p);
  if (!g.allFinite()) {
    res.p = std::move(p);
    res.finite = false;
    return res;
  }
  double gnorm = g.norm();
  if (gnorm < tol * std::max(1.0, p.norm())) {
    res.p = std::move(p);
    res.grad_norm = gnorm;
    return res;
  }
  auto clamp_step = [](double a) {
    return std::min(std::max(a, 1e-10), 1e6);
  };

  constexpr int kMemory = 10;
  double recent[kMemory];
  recent[0] = oracle.value(p);
  int filled = 1, cursor = 1;

  double step = clamp_step(1.0 / gnorm);
  for (int k = 0; k < max_steps; ++k) {
    double watermark = recent[0];
    for (int i = 1; i < filled; ++i) watermark = std::max(watermark, recent[i]);

    Matrix p_next;
    double f_next = 0.0;
    const double gsq = gnorm * gnorm;
    for (int bt = 0;; ++bt) {
      p_next = p - step * g;
      f_next = oracle.value(p_next);
      if (std::isfinite(f_next) &&
          f_next <= watermark - 1e-4 * step * gsq)
        break;
      if (bt >= 30 || step <= 1e-10) break;  // accept the tiny step
      step *= 0.5;
    }

    const Matrix g_next = oracle.grad(p_next);
    if (!p_next.allFinite() || !g_next.allFinite()) {
      res.finite = false;
      break;
    }
    const Matrix s = p_next - p;
    const Matrix y = g_next - g;
    const double sy = (s.array() * y.array()).sum();
    const double ss = s.squaredNorm();
    step = clamp_step(sy > 0.0 ? ss / sy : 1e-4);
    p = p_next;
    g = g_next;
    recent[cursor % kMemory] = f_next;
    ++cursor;
    filled = std::min(filled + 1, kMemory);
    ++res.steps;
    gnorm = g.norm();
    if (gnorm < tol * std::max(1.0, p.norm())) break;
  }
  res.p = std::move(p);
  res.grad_norm = gnorm;
  return res;
}

/// Random starting factor; entries iid uniform on [0, scale), filled in
/// column-major order from the seeded stream.
GramFactor initial_factor(Index n, Index q, std::uint64_t seed, double scale);

/// Constrained completion from exact observations: outer augmented
/// Lagrangian with multiplier update Lambda += A(P P^T) - b, inner BB
/// descent on Tr(P P^T) + (penalty/2) ||A(P P^T) - b + Lambda||^2.
std::pair<GramFactor, SolveReport> solve_exact(const ObservationSet& obs,
                                               const SolverConfig& cfg);

/// Penalized completion from noisy observations:
/// Tr(P P^T) + (lambda/2) ||A(P P^T) - b||^2, BB descent per outer round.
std::pair<GramFactor, SolveReport> solve_noisy(const ObservationSet& obs,
                                               const SolverConfig& cfg);

/// Centered Gram J (P P^T) J; positive semidefinite with zero row sums.
GramMatrix recover_gram(const GramFactor& factor);

struct ReconstructionResult {
  PointCloud points;
  GramMatrix gram;
  SolveReport report;
};

/// Full pipeline: solve, center, embed with classical MDS. When the true
/// Gram is supplied the report carries the relative error against it.
ReconstructionResult reconstruct(const ObservationSet& obs,
                                 const SolverConfig& cfg, Index d, bool noisy,
                                 const GramMatrix* truth = nullptr);

}  // namespace edg
