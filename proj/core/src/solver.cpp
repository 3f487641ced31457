#include "sbgm/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sbgm/errors.hpp"

namespace sbgm {

void SolverConfig::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be positive");
  if (!(newton_rel_tol > 0.0)) throw InvalidArgument("newton_rel_tol must be positive");
  penalty.validate();
}

SolverState init_state(std::size_t p) {
  if (p == 0) throw InvalidArgument("init_state: dimension must be at least 1");
  return {SymMatrix::identity(p), SymMatrix::identity(p), SymMatrix::zeros(p), 0};
}

double energy(const SymMatrix& s, const SymMatrix& theta, const PenaltySpec& penalty) {
  if (s.dim() != theta.dim()) throw DimensionMismatch("energy: S and Theta differ in size");
  const CholeskyFactor f = cholesky(theta);
  return -logdet(f) + inner(s, theta) + value(penalty, theta);
}

ThetaUpdate theta_update(const SymMatrix& k, double mu, const SolverConfig& cfg) {
  if (!(mu > 0.0)) throw InvalidArgument("theta_update: mu must be positive");
  const double alpha = 4.0 * mu;
  NewtonSqrtResult newton = sqrt_newton(k, alpha, {cfg.newton_rel_tol, cfg.newton_max_iter});
  ThetaUpdate out{{}, newton.report, false};
  SymMatrix root = std::move(newton.root);
  if (!newton.report.converged) {
    root = sqrt_eigen(k, alpha);
    out.eigen_fallback = true;
  }
  out.theta = (k + root) / (2.0 * mu);
  return out;
}

double stationarity_residual(const SymMatrix& theta, const SymMatrix& k, double mu) {
  const SymMatrix inv = inverse(cholesky(theta));
  const Matrix r = mu * theta.dense() - inv.dense() - k.dense();
  return frobenius_norm(r) / std::max(frobenius_norm(k), 1.0);
}

SolverState step(const SolverState& state, const SymMatrix& s, const SolverConfig& cfg, StepStats* stats) {
  const double mu = cfg.mu;
  const SymMatrix k = mu * state.a - s - state.m;
  ThetaUpdate upd = theta_update(k, mu, cfg);
  if (stats != nullptr) {
    stats->newton = upd.newton;
    stats->eigen_fallback = upd.eigen_fallback;
  }

  SolverState next;
  next.theta = std::move(upd.theta);
  next.a = prox(cfg.penalty, next.theta + state.m / mu, mu);
  next.m = state.m + mu * (next.theta - next.a);
  next.k = state.k + 1;
  return next;
}

SolverResult run(const SymMatrix& s, const SolverConfig& cfg, const std::optional<SolverState>& init) {
  cfg.validate();
  const std::size_t p = s.dim();
  if (p == 0) throw InvalidArgument("run: empty covariance matrix");
  if ((s.dense().diagonal().array() < 0.0).any()) throw InvalidArgument("run: covariance has a negative diagonal entry");

  const auto started = std::chrono::steady_clock::now();
  SolverResult out{{}, init ? *init : init_state(p), {}};
  SolverState& state = out.state;
  if (state.theta.dim() != p || state.a.dim() != p || state.m.dim() != p) {
    throw DimensionMismatch("run: initial state does not match covariance dimension " + std::to_string(p));
  }
  SolverReport& report = out.report;

  double previous = energy(s, state.theta, cfg.penalty);
  while (report.iterations < cfg.max_outer_iter) {
    StepStats stats;
    SolverState next = step(state, s, cfg, &stats);
    const double a_norm = frobenius_norm(next.a);
    report.dual_residual = a_norm > 0.0 ? frobenius_norm(next.a.dense() - state.a.dense()) / a_norm : 0.0;
    state = std::move(next);
    ++report.iterations;
    report.newton_iters_total += stats.newton.iterations;
    if (stats.eigen_fallback) ++report.newton_fallbacks;

    const double e = energy(s, state.theta, cfg.penalty);
    if (std::isnan(e)) throw NonFiniteError("run: energy became NaN at iteration " + std::to_string(report.iterations));
    report.energy_trace.push_back(e);

    report.energy_change = std::abs(e - previous) / std::max(std::abs(previous), 1.0);
    report.primal_residual = frobenius_norm(state.theta.dense() - state.a.dense()) / frobenius_norm(state.theta);
    report.final_energy = e;
    previous = e;
    const bool dual_ok = !cfg.check_dual_residual || report.dual_residual < cfg.rel_tol;
    if (report.energy_change < cfg.rel_tol && report.primal_residual < cfg.rel_tol && dual_ok) {
      report.converged = true;
      break;
    }
  }

  out.estimate = state.a;
  try {
    report.kkt_residual = kkt_residual(s, out.estimate, cfg.penalty);
  } catch (const NotPositiveDefinite&) {
    report.kkt_residual = std::numeric_limits<double>::infinity();
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

double kkt_residual(const SymMatrix& s, const SymMatrix& theta_hat, const PenaltySpec& spec, double zero_tol) {
  if (s.dim() != theta_hat.dim()) throw DimensionMismatch("kkt_residual: S and Theta differ in size");
  const SymMatrix inv = inverse(cholesky(theta_hat));
  const double l1 = spec.l1_weight();
  const double l2 = spec.l2_weight();
  const auto p = static_cast<Eigen::Index>(s.dim());
  const Matrix& sd = s.dense();
  const Matrix& th = theta_hat.dense();
  const Matrix& id = inv.dense();

  double worst = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      double g = sd(i, j) - id(i, j);
      double violation = 0.0;
      if (i == j) {
        violation = std::abs(g);
      } else if (std::abs(th(i, j)) < zero_tol) {
        violation = std::max(0.0, std::abs(g) - l1);
      } else {
        g += l2 * th(i, j);
        violation = std::abs(g + l1 * (th(i, j) > 0.0 ? 1.0 : -1.0));
      }
      worst = std::max(worst, violation);
    }
  }
  return worst;
}

std::size_t offdiagonal_nnz(const SymMatrix& m, double zero_tol) {
  const Matrix& d = m.dense();
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      if (i != j && std::abs(d(i, j)) > zero_tol) ++count;
    }
  }
  return count;
}

LambdaSearch lambda_for_target_support(const SymMatrix& s, std::size_t target_nnz, const SolverConfig& cfg,
                                       double rel_band, std::size_t max_evaluations) {
  SolverConfig trial = cfg;
  const double top = max_abs_offdiagonal(s);
  const double band = rel_band * static_cast<double>(target_nnz);

  LambdaSearch best;
  bool have_best = false;
  std::optional<SolverState> warm;
  auto evaluate = [&](double lambda) {
    trial.penalty.lambda = lambda;
    SolverResult r = run(s, trial, warm);
    warm = r.state;
    warm->k = 0;
    const std::size_t nnz = offdiagonal_nnz(r.estimate);
    const double miss = std::abs(static_cast<double>(nnz) - static_cast<double>(target_nnz));
    const bool better = !have_best || miss < std::abs(static_cast<double>(best.nnz) - static_cast<double>(target_nnz));
    ++best.evaluations;
    if (better) {
      best.lambda = lambda;
      best.nnz = nnz;
      best.within_tolerance = miss <= band;
      best.result = std::move(r);
      have_best = true;
    }
    return nnz;
  };

  if (top == 0.0) {
    evaluate(0.0);
    return best;
  }
  // log-space bisection; at lambda = top the estimate is diagonal.
  double lo = top * 1e-4;
  double hi = top;
  while (best.evaluations < max_evaluations) {
    const double mid = std::sqrt(lo * hi);
    const std::size_t nnz = evaluate(mid);
    if (best.within_tolerance) break;
    if (nnz > target_nnz) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace sbgm
