#pragma once

#include <cstdint>

#include "sbgm/sbgm.hpp"

namespace sbgm::test {

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / b.norm();
}

/// B B^T / p + shift I with B standard normal.
inline SymMatrix random_spd(std::size_t p, std::uint64_t seed, double shift = 0.5) {
  Rng rng(seed);
  Matrix b(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) = rng.normal();
  }
  Matrix m = b * b.transpose() / static_cast<double>(p);
  m.diagonal().array() += shift;
  return SymMatrix::symmetrized(m);
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.normal();
  }
  return m;
}

/// Spectrum from Eigen's own solver; kept apart from the Jacobi code under test.
inline Vector reference_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

}  // namespace sbgm::test
