#include "edg/solver.hpp"

#include "edg/geometry.hpp"
#include "edg/rng.hpp"

#include <chrono>

namespace edg {

void SolverConfig::validate() const {
  if (q < 1) throw InvalidArgument("solver config: q must be >= 1");
  if (penalty <= 0.0)
    throw InvalidArgument("solver config: penalty must be positive");
  if (lambda && *lambda <= 0.0)
    throw InvalidArgument("solver config: lambda must be positive");
  if (!(tol > 0.0 && tol < 1.0))
    throw InvalidArgument("solver config: tol must lie in (0, 1)");
  if (max_outer < 1 || bb_inner < 1)
    throw InvalidArgument("solver config: iteration counts must be >= 1");
  if (init_scale <= 0.0)
    throw InvalidArgument("solver config: init_scale must be positive");
}

GramFactor initial_factor(Index n, Index q, std::uint64_t seed,
                          double scale) {
  Rng rng(seed);
  Matrix p(n, q);
  for (Index c = 0; c < q; ++c)
    for (Index r = 0; r < n; ++r) p(r, c) = scale * rng.uniform();
  return {std::move(p)};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool relative_change_small(double current, double previous, double tol) {
  const double denom = std::abs(current);
  if (denom == 0.0) return std::abs(previous) == 0.0;
  return std::abs(current - previous) / denom < tol;
}

}  // namespace

std::pair<GramFactor, SolveReport> solve_exact(const ObservationSet& obs,
                                               const SolverConfig& cfg) {
  validate(obs);
  cfg.validate();
  const auto t0 = Clock::now();

  const Vector& b = obs.values;
  const double b_sq = b.squaredNorm();
  Matrix p = initial_factor(obs.n, cfg.q, cfg.seed, cfg.init_scale).p;
  Vector multiplier = Vector::Zero(obs.size());

  SolveReport report;
  double prev_total = 0.0;  // E_Total^0
  double first_total = 0.0;

  for (int k = 1; k <= cfg.max_outer; ++k) {
    FactoredObjective obj{&obs, b - multiplier, cfg.penalty};
    BbResult inner = bb_descent(obj, std::move(p), cfg.bb_inner, cfg.tol);
    p = std::move(inner.p);

    const Vector resid = measure_factored(p, obs) - b;
    multiplier += resid;
    const double feas = 0.5 * cfg.penalty * resid.squaredNorm();
    const double total =
        p.squaredNorm() +
        0.5 * cfg.penalty * (resid + multiplier).squaredNorm();
    report.energy_trace.push_back({total, feas});
    report.iterations = k;
    if (k == 1) first_total = total;

    if (!inner.finite || !std::isfinite(total)) {
      report.diverged = true;
      report.status = "non-finite energy";
      break;
    }
    if (total > cfg.divergence_factor * std::max(first_total, 1.0)) {
      report.diverged = true;
      report.status = "energy grew past the divergence guard";
      break;
    }

    bool stop = false;
    switch (cfg.stop_rule) {
      case StopRule::kReconciled:
        // Feasibility gate: relative residual below tol, i.e.
        // ||A(PP^T) - b|| < tol ||b||.
        stop = relative_change_small(total, prev_total, cfg.tol) &&
               feas < 0.5 * cfg.penalty * cfg.tol * cfg.tol * b_sq;
        break;
      case StopRule::kBox:
        stop = feas < cfg.tol && total < cfg.tol;
        break;
      case StopRule::kRelativeEnergy:
        stop = relative_change_small(total, prev_total, cfg.tol);
        break;
    }
    prev_total = total;
    if (stop) {
      report.converged = true;
      break;
    }
  }

  if (!report.converged && !report.diverged)
    report.status = "stopped at the iteration cap";
  else if (report.converged)
    report.status = "converged";

  report.final_gram = recover_gram({p});
  report.wall_time = seconds_since(t0);
  return {GramFactor{std::move(p)}, std::move(report)};
}

std::pair<GramFactor, SolveReport> solve_noisy(const ObservationSet& obs,
                                               const SolverConfig& cfg) {
  validate(obs);
  cfg.validate();
  const auto t0 = Clock::now();

  const double gamma = static_cast<double>(obs.size()) /
                       static_cast<double>(num_pairs(obs.n));
  const double lambda = cfg.lambda.value_or(100.0 * gamma);

  const Vector& b = obs.values;
  Matrix p = initial_factor(obs.n, cfg.q, cfg.seed, cfg.init_scale).p;
  const FactoredObjective obj{&obs, b, lambda};

  SolveReport report;
  report.resolved_lambda = lambda;
  double prev_total = 0.0;
  double first_total = 0.0;

  for (int k = 1; k <= cfg.max_outer; ++k) {
    BbResult inner = bb_descent(obj, std::move(p), cfg.bb_inner, cfg.tol);
    p = std::move(inner.p);

    const Vector resid = measure_factored(p, obs) - b;
    const double feas = 0.5 * lambda * resid.squaredNorm();
    const double total = p.squaredNorm() + feas;
    report.energy_trace.push_back({total, feas});
    report.iterations = k;
    if (k == 1) first_total = total;

    if (!inner.finite || !std::isfinite(total)) {
      report.diverged = true;
      report.status = "non-finite energy";
      break;
    }
    if (total > cfg.divergence_factor * std::max(first_total, 1.0)) {
      report.diverged = true;
      report.status = "energy grew past the divergence guard";
      break;
    }

    bool stop = false;
    switch (cfg.stop_rule) {
      case StopRule::kReconciled:
      case StopRule::kRelativeEnergy:
        stop = relative_change_small(total, prev_total, cfg.tol);
        break;
      case StopRule::kBox:
        stop = total < cfg.tol;
        break;
    }
    prev_total = total;
    if (stop) {
      report.converged = true;
      break;
    }
  }

  if (!report.converged && !report.diverged)
    report.status = "stopped at the iteration cap";
  else if (report.converged)
    report.status = "converged";

  report.final_gram = recover_gram({p});
  report.wall_time = seconds_since(t0);
  return {GramFactor{std::move(p)}, std::move(report)};
}

GramMatrix recover_gram(const GramFactor& factor) {
  if (!factor.p.allFinite())
    throw InvalidArgument("recover_gram: factor has non-finite entries");
  const Matrix centered =
      factor.p.rowwise() - factor.p.colwise().mean();
  return {centered * centered.transpose()};
}

ReconstructionResult reconstruct(const ObservationSet& obs,
                                 const SolverConfig& cfg, Index d, bool noisy,
                                 const GramMatrix* truth) {
  auto [factor, report] =
      noisy ? solve_noisy(obs, cfg) : solve_exact(obs, cfg);
  GramMatrix gram = recover_gram(factor);
  if (truth) report.relative_error = relative_gram_error(gram, *truth);
  PointCloud points = mds_embed(gram, d);
  return {std::move(points), std::move(gram), std::move(report)};
}

}  // namespace edg
