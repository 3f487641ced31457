#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "sbgm/errors.hpp"
#include "sbgm/symmat.hpp"

namespace sbgm {
namespace {

double offdiagonal_mass(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < a.rows(); ++i) sum += a(i, j) * a(i, j);
  }
  return std::sqrt(2.0 * sum);
}

// One plane rotation zeroing a(p, q); both triangles of `a` are kept current.
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    a(p, k) = a(k, p);
    a(q, k) = a(k, q);
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition jacobi_eigen(const SymMatrix& m, const JacobiOptions& opts) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Matrix a = m.dense();
  Matrix v = Matrix::Identity(n, n);
  const double target = opts.rel_tol * a.norm();

  EigenDecomposition out;
  double off = offdiagonal_mass(a);
  while (off > target) {
    if (out.sweeps == opts.max_sweeps) {
      throw ConvergenceError("jacobi_eigen: no convergence after " + std::to_string(opts.max_sweeps) +
                                 " sweeps, off-diagonal mass " + std::to_string(off),
                             off);
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    ++out.sweeps;
    off = offdiagonal_mass(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src);
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

SymMatrix sqrt_eigen(const SymMatrix& k, double alpha, const JacobiOptions& opts) {
  if (!(alpha > 0.0)) throw InvalidArgument("sqrt_eigen: alpha must be positive");
  const EigenDecomposition eig = jacobi_eigen(k, opts);
  const Vector roots = (eig.eigenvalues.array().square() + alpha).sqrt().matrix();
  const Matrix& u = eig.eigenvectors;
  return SymMatrix::symmetrized(u * roots.asDiagonal() * u.transpose());
}

}  // namespace sbgm
