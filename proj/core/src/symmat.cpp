#include "sbgm/symmat.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sbgm/errors.hpp"

namespace sbgm {
namespace {

void require_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw NonFiniteError(std::string(where) + ": non-finite entry");
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("symmetric operands of size " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
  }
}

}  // namespace

SymMatrix::SymMatrix(std::size_t p) : m_(Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))) {}

SymMatrix SymMatrix::identity(std::size_t p) {
  SymMatrix out(p);
  out.m_.diagonal().setOnes();
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  require_finite(out.m_, "SymMatrix::diagonal");
  return out;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("cannot symmetrize a " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + " array");
  }
  require_finite(m, "SymMatrix::symmetrized");
  SymMatrix out;
  out.m_ = 0.5 * (m + m.transpose());
  return out;
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto p = static_cast<Eigen::Index>(rows.size());
  Matrix m(p, p);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != p) throw DimensionMismatch("ragged row in SymMatrix::from_rows");
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  if (m != m.transpose()) throw InvalidArgument("SymMatrix::from_rows: rows are not symmetric");
  return symmetrized(m);
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw NonFiniteError("SymMatrix::set: non-finite value");
  const auto r = static_cast<Eigen::Index>(i);
  const auto c = static_cast<Eigen::Index>(j);
  m_(r, c) = v;
  m_(c, r) = v;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  require_same_dim(*this, o);
  m_ += o.m_;
  require_finite(m_, "SymMatrix::operator+=");
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  require_same_dim(*this, o);
  m_ -= o.m_;
  require_finite(m_, "SymMatrix::operator-=");
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  require_finite(m_, "SymMatrix::operator*=");
  return *this;
}

SymMatrix& SymMatrix::operator/=(double s) {
  m_ /= s;
  require_finite(m_, "SymMatrix::operator/=");
  return *this;
}

SymMatrix SymMatrix::permuted(std::span<const std::size_t> perm) const {
  const std::size_t p = dim();
  if (perm.size() != p) throw DimensionMismatch("permutation length does not match matrix dimension");
  std::vector<bool> seen(p, false);
  for (std::size_t k : perm) {
    if (k >= p || seen[k]) throw InvalidArgument("permuted: not a permutation of 0..p-1");
    seen[k] = true;
  }
  SymMatrix out(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      out.m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m_(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
    }
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix out = Matrix::Zero(a.rows(), b.cols());
  out.noalias() += a * b;
  return out;
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double trace(const Matrix& m) { return m.trace(); }

double inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("inner: shapes differ");
  return a.cwiseProduct(b).sum();
}

double max_abs_offdiagonal(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) best = std::max(best, std::abs(m(i, j)));
    }
  }
  return best;
}

}  // namespace sbgm
