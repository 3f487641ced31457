#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sbgm/penalty.hpp"
#include "sbgm/symmat.hpp"

namespace sbgm {

struct SolverConfig {
  PenaltySpec penalty;
  double mu = 0.5;
  /// Threshold on the relative energy change and on ||Theta - A||_F / ||Theta||_F.
  double rel_tol = 1e-4;
  std::size_t max_outer_iter = 2000;
  double newton_rel_tol = 1e-6;
  std::size_t newton_max_iter = 50;
  /// Also require ||A^{k+1} - A^k||_F / ||A^{k+1}||_F < rel_tol before stopping.
  /// Off reproduces the two-condition rule (energy change and primal residual).
  bool check_dual_residual = true;

  /// Throws InvalidArgument on mu <= 0, rel_tol <= 0 or an invalid penalty.
  void validate() const;
};

/// The (Theta, A, M) triple of the splitting plus its iteration counter.
struct SolverState {
  SymMatrix theta;
  SymMatrix a;
  SymMatrix m;
  std::size_t k = 0;

  std::size_t dim() const noexcept { return theta.dim(); }
};

/// Theta = A = I, M = 0.
SolverState init_state(std::size_t p);

struct SolverReport {
  std::size_t iterations = 0;
  std::vector<double> energy_trace;  // energy of Theta^k, k = 1..iterations
  double final_energy = 0.0;
  double primal_residual = 0.0;  // ||Theta - A||_F / ||Theta||_F
  double dual_residual = 0.0;    // ||A^k - A^{k-1}||_F / ||A^k||_F
  double energy_change = 0.0;    // |E^k - E^{k-1}| / max(|E^{k-1}|, 1)
  double kkt_residual = 0.0;     // evaluated at the returned estimate
  bool converged = false;
  std::size_t newton_iters_total = 0;
  std::size_t newton_fallbacks = 0;  // Theta updates that fell back to sqrt_eigen
  double wall_time_seconds = 0.0;
};

struct SolverResult {
  /// The A iterate: exactly sparse where the prox thresholded.
  SymMatrix estimate;
  SolverState state;
  SolverReport report;
};

/// -log det(theta) + tr(s theta) + value(penalty, theta).
/// Throws NotPositiveDefinite if theta is not SPD.
double energy(const SymMatrix& s, const SymMatrix& theta, const PenaltySpec& penalty);

struct ThetaUpdate {
  SymMatrix theta;
  NewtonSqrtReport newton;
  bool eigen_fallback = false;
};

/// Solves -Theta^{-1} + mu Theta = k for SPD Theta:
///   Theta = (k + sqrt(k^2 + 4 mu I)) / (2 mu).
/// The square root comes from sqrt_newton; if Newton does not converge the
/// Jacobi path is used instead and `eigen_fallback` is set.
ThetaUpdate theta_update(const SymMatrix& k, double mu, const SolverConfig& cfg);

/// ||-Theta^{-1} + mu Theta - k||_F / max(||k||_F, 1).
double stationarity_residual(const SymMatrix& theta, const SymMatrix& k, double mu);

struct StepStats {
  NewtonSqrtReport newton;
  bool eigen_fallback = false;
};

/// One sweep of the splitting:
///   K = mu A - S - M,  Theta+ = theta_update(K),
///   A+ = prox(Theta+ + M / mu),  M+ = M + mu (Theta+ - A+).
SolverState step(const SolverState& state, const SymMatrix& s, const SolverConfig& cfg,
                 StepStats* stats = nullptr);

/// Iterates `step` from `init` (or init_state) until the relative energy
/// change, the primal residual and (unless disabled) the dual residual are
/// all below cfg.rel_tol, or the iteration cap is hit (converged = false,
/// result still returned).
/// Throws NonFiniteError if the energy becomes NaN.
SolverResult run(const SymMatrix& s, const SolverConfig& cfg, const std::optional<SolverState>& init = std::nullopt);

/// Largest first-order optimality violation of the penalized likelihood at
/// theta_hat. With G = S - theta_hat^{-1} + l2 * offdiag(theta_hat):
///   diagonal           |G_ii|
///   off-diag nonzero   |G_ij + l1 sgn(theta_ij)|
///   off-diag zero      max(0, |G_ij| - l1)
/// Entries with |theta_ij| < zero_tol count as zero. Throws
/// NotPositiveDefinite if theta_hat is not SPD.
double kkt_residual(const SymMatrix& s, const SymMatrix& theta_hat, const PenaltySpec& spec,
                    double zero_tol = 1e-10);

/// Number of off-diagonal entries (both triangles) with |m_ij| > zero_tol.
std::size_t offdiagonal_nnz(const SymMatrix& m, double zero_tol = 1e-10);

struct LambdaSearch {
  double lambda = 0.0;
  std::size_t nnz = 0;
  std::size_t evaluations = 0;
  bool within_tolerance = false;
  SolverResult result;
};

/// Bisects log(lambda) on (0, max_{i!=j} |S_ij|] for an estimate whose
/// off-diagonal nonzero count is within rel_band of target_nnz. Each solve
/// is warm-started from the previous one. cfg.penalty.lambda is ignored.
LambdaSearch lambda_for_target_support(const SymMatrix& s, std::size_t target_nnz, const SolverConfig& cfg,
                                       double rel_band = 0.1, std::size_t max_evaluations = 30);

}  // namespace sbgm
