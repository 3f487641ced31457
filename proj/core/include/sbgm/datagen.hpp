#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "sbgm/symmat.hpp"

namespace sbgm {

/// Portable seeded generator: std::mt19937_64 (fully specified by the
/// standard) with uniforms built from the top 53 bits and normals from the
/// Box-Muller transform. Unlike the <random> distributions, the streams are
/// identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, n), by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct GroundTruthModel {
  SymMatrix precision;
  SymMatrix covariance;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  std::size_t nnz_offdiag = 0;  // both triangles
  double identity_shift = 0.0;  // multiple of I added for definiteness
  double min_eigenvalue = 0.0;  // of the final precision
};

/// Observations stored row-wise, n x p.
struct SampleMatrix {
  Matrix rows;

  std::size_t n() const noexcept { return static_cast<std::size_t>(rows.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(rows.cols()); }
};

/// Sparse SPD precision matrix: uniform [1, 2] diagonal, min(p, p(p-1)/2)
/// distinct upper-triangle locations filled with +/-[0.5, 1] and mirrored,
/// then shifted by (0.2 - lambda_min) I whenever lambda_min <= 0.1.
GroundTruthModel generate_sparse_precision(std::size_t p, std::uint64_t seed);

/// (B + B^T) / 2 with B a p x p matrix of standard normals.
SymMatrix random_symmetric_gaussian(std::size_t p, std::uint64_t seed);

/// n i.i.d. zero-mean draws x = L z with L L^T = model.covariance.
SampleMatrix sample_gaussian(const GroundTruthModel& model, std::size_t n, std::uint64_t seed);

/// (1/n) sum_i (x_i - xbar)(x_i - xbar)^T.
SymMatrix empirical_covariance(const SampleMatrix& x);

/// ||est - truth||_F / ||truth||_F. Throws InvalidArgument for a zero truth.
double relative_error(const SymMatrix& est, const SymMatrix& truth);

struct SupportMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision/recall of the off-diagonal support {(i < j) : |entry| > zero_tol}.
/// An empty support counts as perfect precision (resp. recall) only when the
/// other support is empty too.
SupportMetrics support_metrics(const SymMatrix& est, const SymMatrix& truth, double zero_tol = 1e-6);

}  // namespace sbgm
