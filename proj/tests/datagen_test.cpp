#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "support.hpp"

namespace sbgm {
namespace {

std::size_t upper_nonzeros(const SymMatrix& m) {
  std::size_t n = 0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    for (std::size_t i = 0; i < j; ++i) n += m(i, j) != 0.0;
  }
  return n;
}

TEST(Rng, KnownStream) {
  // mt19937_64 with the default seed: the 10000th output is fixed by the standard.
  Rng rng(5489);
  std::mt19937_64 ref(5489);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(rng.uniform(), static_cast<double>(ref() >> 11) * 0x1.0p-53);
  }
  std::mt19937_64 check;
  check.discard(9999);
  EXPECT_EQ(check(), 9981545732273789042ULL);
}

TEST(Rng, RangesAndMoments) {
  Rng rng(1);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    ASSERT_TRUE(std::isfinite(z));
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));

  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t k = rng.below(7);
    ASSERT_LT(k, 7u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_THROW(rng.below(0), InvalidArgument);
}

TEST(GenerateSparsePrecision, Examples) {
  GroundTruthModel m = generate_sparse_precision(10, 1);
  EXPECT_EQ(m.nnz_offdiag, 20u);
  EXPECT_EQ(upper_nonzeros(m.precision), 10u);
  EXPECT_EQ(offdiagonal_nnz(m.precision), 20u);
  EXPECT_NO_THROW(cholesky(m.precision));
  EXPECT_EQ(m.p, 10u);
  EXPECT_EQ(m.seed, 1u);

  GroundTruthModel again = generate_sparse_precision(10, 1);
  EXPECT_EQ(again.precision, m.precision);
  EXPECT_EQ(again.covariance, m.covariance);
  EXPECT_NE(generate_sparse_precision(10, 2).precision, m.precision);

  EXPECT_THROW(generate_sparse_precision(1, 1), InvalidArgument);
  EXPECT_THROW(generate_sparse_precision(0, 1), InvalidArgument);
}

TEST(GenerateSparsePrecision, SmallDimensionsCapLocations) {
  // p = 2 has a single upper slot, p = 3 has exactly three.
  EXPECT_EQ(generate_sparse_precision(2, 4).nnz_offdiag, 2u);
  EXPECT_EQ(generate_sparse_precision(3, 4).nnz_offdiag, 6u);
  EXPECT_EQ(generate_sparse_precision(4, 4).nnz_offdiag, 8u);
}

TEST(GenerateSparsePrecision, EntryRanges) {
  GroundTruthModel m = generate_sparse_precision(40, 5);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 40; ++j) {
      const double v = m.precision(i, j);
      if (i == j) {
        EXPECT_GE(v, 1.0 + m.identity_shift);
        EXPECT_LT(v, 2.0 + m.identity_shift);
      } else if (v != 0.0) {
        EXPECT_GE(std::abs(v), 0.5);
        EXPECT_LT(std::abs(v), 1.0);
      }
    }
  }
}

TEST(GenerateSparsePrecision, InvariantsOverManySeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GroundTruthModel m = generate_sparse_precision(50, seed);
    const Vector ev = jacobi_eigen(m.precision).eigenvalues;
    EXPECT_GE(ev.minCoeff(), 0.1 - 1e-9) << seed;
    EXPECT_NEAR(ev.minCoeff(), m.min_eigenvalue, 1e-9) << seed;
    EXPECT_LE(m.nnz_offdiag, 100u);
    EXPECT_EQ(m.nnz_offdiag % 2, 0u);
    EXPECT_EQ(m.nnz_offdiag, offdiagonal_nnz(m.precision));
    const Matrix prod = m.precision.dense() * m.covariance.dense();
    EXPECT_LE((prod - Matrix::Identity(50, 50)).norm() / std::sqrt(50.0), 1e-8) << seed;
    if (m.identity_shift > 0.0) {
      EXPECT_NEAR(ev.minCoeff(), 0.2, 1e-9) << seed;
    }
  }
}

TEST(SampleGaussian, Examples) {
  GroundTruthModel model = generate_sparse_precision(5, 6);
  SampleMatrix one = sample_gaussian(model, 1, 7);
  EXPECT_EQ(one.n(), 1u);
  EXPECT_EQ(one.p(), 5u);
  EXPECT_TRUE(one.rows.allFinite());

  SampleMatrix a = sample_gaussian(model, 20, 8);
  SampleMatrix b = sample_gaussian(model, 20, 8);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_NE(sample_gaussian(model, 20, 9).rows, a.rows);
  EXPECT_THROW(sample_gaussian(model, 0, 1), InvalidArgument);
}

GroundTruthModel identity_model(std::size_t p) {
  GroundTruthModel m;
  m.p = p;
  m.precision = SymMatrix::identity(p);
  m.covariance = SymMatrix::identity(p);
  return m;
}

TEST(SampleGaussian, LawOfLargeNumbers) {
  SymMatrix s = empirical_covariance(sample_gaussian(identity_model(3), 100000, 10));
  EXPECT_LE((s.dense() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(SampleGaussian, MeanWithinFiveSigma) {
  GroundTruthModel model = generate_sparse_precision(8, 11);
  const std::size_t n = 100000;
  SampleMatrix x = sample_gaussian(model, n, 12);
  const Vector mean = x.rows.colwise().mean();
  const double bound = 5.0 * std::sqrt(model.covariance.dense().diagonal().maxCoeff()) / std::sqrt(double(n));
  EXPECT_LE(mean.cwiseAbs().maxCoeff(), bound);
}

TEST(SampleGaussian, CovarianceMatchesModel) {
  GroundTruthModel model = generate_sparse_precision(6, 13);
  SymMatrix s = empirical_covariance(sample_gaussian(model, 200000, 14));
  // Each entry's standard error is at most sqrt(2/n) * max diag.
  const double tol = 5.0 * std::sqrt(2.0 / 200000.0) * model.covariance.dense().diagonal().maxCoeff();
  EXPECT_LE((s.dense() - model.covariance.dense()).cwiseAbs().maxCoeff(), tol);
}

TEST(EmpiricalCovariance, Examples) {
  SampleMatrix x{Matrix{{1, 0}, {-1, 0}}};
  EXPECT_EQ(empirical_covariance(x), SymMatrix::from_rows({{1, 0}, {0, 0}}));
  SampleMatrix single{Matrix{{3, -2, 5}}};
  EXPECT_EQ(empirical_covariance(single), SymMatrix::zeros(3));

  SampleMatrix r{test::random_matrix(200, 4, 15)};
  SymMatrix s = empirical_covariance(r);
  EXPECT_GE(jacobi_eigen(s).eigenvalues.minCoeff(), -1e-12);
  EXPECT_THROW(empirical_covariance(SampleMatrix{Matrix(0, 3)}), InvalidArgument);
}

TEST(EmpiricalCovariance, MatchesTwoPassFormula) {
  SampleMatrix x{test::random_matrix(50, 5, 16)};
  x.rows.col(2).array() += 10.0;
  const Vector mean = x.rows.colwise().mean();
  Matrix expect = Matrix::Zero(5, 5);
  for (Eigen::Index k = 0; k < 50; ++k) {
    const Vector d = x.rows.row(k).transpose() - mean;
    expect += d * d.transpose();
  }
  expect /= 50.0;
  EXPECT_LE(test::rel_diff(empirical_covariance(x), expect), 1e-13);
}

TEST(EmpiricalCovariance, ConvergesInN) {
  GroundTruthModel model = generate_sparse_precision(20, 17);
  std::vector<double> err;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    err.push_back(relative_error(empirical_covariance(sample_gaussian(model, n, 100 + n)), model.covariance));
  }
  EXPECT_LT(err[2], err[0]);
  EXPECT_LT(err[1], err[0]);
  EXPECT_LT(err[2], err[1]);
}

TEST(RelativeError, Examples) {
  SymMatrix t = test::random_spd(5, 18);
  EXPECT_EQ(relative_error(t, t), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(2.0 * t, t), 1.0);
  SymMatrix e = SymMatrix::symmetrized(test::random_matrix(5, 5, 19));
  e *= 0.1 * frobenius_norm(t) / frobenius_norm(e);
  EXPECT_NEAR(relative_error(t + e, t), 0.1, 1e-14);
  EXPECT_THROW(relative_error(t, SymMatrix::zeros(5)), InvalidArgument);
  EXPECT_THROW(relative_error(t, SymMatrix::identity(4)), DimensionMismatch);
}

TEST(SupportMetrics, Examples) {
  GroundTruthModel m = generate_sparse_precision(12, 20);
  SupportMetrics same = support_metrics(m.precision, m.precision);
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);
  EXPECT_EQ(same.f1, 1.0);

  SupportMetrics diag = support_metrics(SymMatrix::identity(12), m.precision);
  EXPECT_EQ(diag.recall, 0.0);
  EXPECT_EQ(diag.f1, 0.0);

  // Add as many new upper locations as the truth has.
  SymMatrix super = m.precision;
  std::size_t added = 0;
  for (std::size_t j = 1; j < 12 && added < 12; ++j) {
    for (std::size_t i = 0; i < j && added < 12; ++i) {
      if (super(i, j) == 0.0) {
        super.set(i, j, 0.3);
        ++added;
      }
    }
  }
  SupportMetrics sup = support_metrics(super, m.precision);
  EXPECT_DOUBLE_EQ(sup.precision, 0.5);
  EXPECT_EQ(sup.recall, 1.0);
  EXPECT_DOUBLE_EQ(sup.f1, 2.0 / 3.0);
}

TEST(SupportMetrics, EmptySupports) {
  SupportMetrics both = support_metrics(SymMatrix::identity(4), SymMatrix::identity(4));
  EXPECT_EQ(both.precision, 1.0);
  EXPECT_EQ(both.recall, 1.0);
  EXPECT_EQ(both.f1, 1.0);
  SymMatrix one = SymMatrix::identity(4);
  one.set(0, 3, 1.0);
  SupportMetrics est_empty = support_metrics(SymMatrix::identity(4), one);
  EXPECT_EQ(est_empty.precision, 0.0);
  EXPECT_EQ(est_empty.recall, 0.0);
  SupportMetrics truth_empty = support_metrics(one, SymMatrix::identity(4));
  EXPECT_EQ(truth_empty.precision, 0.0);
  EXPECT_EQ(truth_empty.recall, 0.0);
}

TEST(SupportMetrics, ZeroToleranceApplies) {
  SymMatrix t = SymMatrix::identity(3);
  t.set(0, 1, 1.0);
  SymMatrix e = t;
  e.set(1, 2, 1e-7);
  EXPECT_EQ(support_metrics(e, t).precision, 1.0);
  EXPECT_EQ(support_metrics(e, t, 1e-8).precision, 0.5);
}

}  // namespace
}  // namespace sbgm
