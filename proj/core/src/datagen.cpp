#include "sbgm/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "sbgm/errors.hpp"

namespace sbgm {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform() lies in (0, 1], keeping the log finite.
  const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Rng::below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

GroundTruthModel generate_sparse_precision(std::size_t p, std::uint64_t seed) {
  if (p < 2) throw InvalidArgument("generate_sparse_precision: p must be at least 2, got " + std::to_string(p));
  Rng rng(seed);
  Matrix theta = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < theta.rows(); ++i) theta(i, i) = rng.uniform(1.0, 2.0);

  const std::uint64_t slots = static_cast<std::uint64_t>(p) * (p - 1) / 2;
  const std::uint64_t want = std::min<std::uint64_t>(p, slots);
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  while (chosen.size() < want) {
    const auto i = static_cast<std::size_t>(rng.below(p));
    const auto j = static_cast<std::size_t>(rng.below(p));
    if (i == j) continue;
    if (!chosen.emplace(std::min(i, j), std::max(i, j)).second) continue;
    const double magnitude = rng.uniform(0.5, 1.0);
    const double v = rng.uniform() < 0.5 ? -magnitude : magnitude;
    theta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    theta(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  }

  GroundTruthModel model;
  model.p = p;
  model.seed = seed;
  model.nnz_offdiag = 2 * chosen.size();

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(theta, Eigen::EigenvaluesOnly);
  double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min <= 0.1) {
    model.identity_shift = 0.1 - lambda_min + 0.1;
    theta.diagonal().array() += model.identity_shift;
    lambda_min += model.identity_shift;
  }
  model.min_eigenvalue = lambda_min;
  model.precision = SymMatrix::symmetrized(theta);
  model.covariance = inverse(cholesky(model.precision));
  return model;
}

SymMatrix random_symmetric_gaussian(std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix b(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) = rng.normal();
  }
  return SymMatrix::symmetrized(b);
}

SampleMatrix sample_gaussian(const GroundTruthModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample_gaussian: n must be at least 1");
  const CholeskyFactor f = cholesky(model.covariance);
  const auto p = static_cast<Eigen::Index>(model.covariance.dim());
  Rng rng(seed);
  Matrix z(static_cast<Eigen::Index>(n), p);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < p; ++c) z(r, c) = rng.normal();
  }
  // Row r is (L z_r)^T = z_r^T L^T.
  return {z * f.lower().transpose()};
}

SymMatrix empirical_covariance(const SampleMatrix& x) {
  if (x.n() == 0) throw InvalidArgument("empirical_covariance: no observations");
  const Eigen::RowVectorXd mean = x.rows.colwise().mean();
  const Matrix centered = x.rows.rowwise() - mean;
  return SymMatrix::symmetrized(centered.transpose() * centered / static_cast<double>(x.n()));
}

double relative_error(const SymMatrix& est, const SymMatrix& truth) {
  if (est.dim() != truth.dim()) throw DimensionMismatch("relative_error: dimensions differ");
  const double scale = frobenius_norm(truth);
  if (scale == 0.0) throw InvalidArgument("relative_error: reference matrix is zero");
  return frobenius_norm(est.dense() - truth.dense()) / scale;
}

SupportMetrics support_metrics(const SymMatrix& est, const SymMatrix& truth, double zero_tol) {
  if (est.dim() != truth.dim()) throw DimensionMismatch("support_metrics: dimensions differ");
  if (!(zero_tol > 0.0)) throw InvalidArgument("support_metrics: zero_tol must be positive");
  std::size_t hits = 0;
  std::size_t est_size = 0;
  std::size_t truth_size = 0;
  const std::size_t p = est.dim();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j + 1; i < p; ++i) {
      const bool in_est = std::abs(est(i, j)) > zero_tol;
      const bool in_truth = std::abs(truth(i, j)) > zero_tol;
      est_size += in_est;
      truth_size += in_truth;
      hits += in_est && in_truth;
    }
  }
  SupportMetrics out;
  out.precision = est_size > 0 ? static_cast<double>(hits) / static_cast<double>(est_size) : (truth_size == 0 ? 1.0 : 0.0);
  out.recall = truth_size > 0 ? static_cast<double>(hits) / static_cast<double>(truth_size) : (est_size == 0 ? 1.0 : 0.0);
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

}  // namespace sbgm
