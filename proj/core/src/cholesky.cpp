#include <algorithm>
#include <cmath>

#include "sbgm/errors.hpp"
#include "sbgm/symmat.hpp"

namespace sbgm {
namespace {

constexpr Eigen::Index kBlock = 64;

// Unblocked factorization of the diagonal block in place (lower triangle).
// `offset` only shifts the pivot index reported on failure.
void factor_diagonal_block(Eigen::Ref<Matrix> a, Eigen::Index offset) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    if (j > 0) d -= a.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NotPositiveDefinite(static_cast<std::size_t>(offset + j), d);
    }
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    const Eigen::Index rest = n - j - 1;
    if (rest > 0) {
      if (j > 0) a.col(j).tail(rest).noalias() -= a.block(j + 1, 0, rest, j) * a.row(j).head(j).transpose();
      a.col(j).tail(rest) /= ljj;
    }
  }
}

}  // namespace

CholeskyFactor cholesky(const SymMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Matrix a = m.dense();
  for (Eigen::Index k = 0; k < n; k += kBlock) {
    const Eigen::Index bs = std::min(kBlock, n - k);
    factor_diagonal_block(a.block(k, k, bs, bs), k);
    const Eigen::Index rest = n - k - bs;
    if (rest > 0) {
      auto l11 = a.block(k, k, bs, bs).triangularView<Eigen::Lower>();
      auto panel = a.block(k + bs, k, rest, bs);
      // L21 = A21 L11^{-T}
      l11.transpose().solveInPlace<Eigen::OnTheRight>(panel);
      a.block(k + bs, k + bs, rest, rest).selfadjointView<Eigen::Lower>().rankUpdate(panel, -1.0);
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return CholeskyFactor(std::move(a));
}

Matrix solve_spd(const CholeskyFactor& f, const Matrix& b) {
  if (static_cast<std::size_t>(b.rows()) != f.dim()) {
    throw DimensionMismatch("solve_spd: factor is " + std::to_string(f.dim()) + " but rhs has " +
                            std::to_string(b.rows()) + " rows");
  }
  Matrix y = b;
  const auto l = f.lower().triangularView<Eigen::Lower>();
  l.solveInPlace(y);
  l.transpose().solveInPlace(y);
  return y;
}

double logdet(const CholeskyFactor& f) {
  return 2.0 * f.lower().diagonal().array().log().sum();
}

SymMatrix inverse(const CholeskyFactor& f) {
  const auto p = static_cast<Eigen::Index>(f.dim());
  Matrix linv = Matrix::Identity(p, p);
  f.lower().triangularView<Eigen::Lower>().solveInPlace(linv);
  // (L L^T)^{-1} = L^{-T} L^{-1}; only the lower triangle is formed.
  Matrix out = Matrix::Zero(p, p);
  out.selfadjointView<Eigen::Lower>().rankUpdate(linv.transpose());
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return SymMatrix::symmetrized(out);
}

}  // namespace sbgm
