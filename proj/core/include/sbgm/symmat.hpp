#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>

#include <Eigen/Dense>

namespace sbgm {

/// General dense p x p array. Products of symmetric matrices land here.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix with full (both-triangle) storage.
///
/// Every way of building one goes through symmetrization, so
/// `m(i, j) == m(j, i)` holds bitwise, and entries are checked finite.
/// Arithmetic between symmetric operands is entrywise and stays exactly
/// symmetric without further work.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// p x p zero matrix.
  explicit SymMatrix(std::size_t p);

  static SymMatrix zeros(std::size_t p) { return SymMatrix(p); }
  static SymMatrix identity(std::size_t p);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix diagonal(std::initializer_list<double> d);
  /// (m + m^T) / 2. Throws on non-square or non-finite input.
  static SymMatrix symmetrized(const Matrix& m);
  /// Rows must already be exactly symmetric; throws InvalidArgument otherwise.
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v);

  const Matrix& dense() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }  // NOLINT: implicit by design of the kernel API

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);
  SymMatrix& operator/=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator/(SymMatrix a, double s) { return a /= s; }
  friend SymMatrix operator-(SymMatrix a) { return a *= -1.0; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

  /// Symmetric permutation P^T M P where column k of P is e_{perm[k]}, i.e.
  /// result(i, j) = m(perm[i], perm[j]).
  SymMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  Matrix m_;
};

/// Dense product. Throws DimensionMismatch when inner dimensions differ.
Matrix matmul(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
double trace(const Matrix& m);
/// tr(a^T b).
double inner(const Matrix& a, const Matrix& b);
/// max_{i != j} |m_ij|; zero for p < 2.
double max_abs_offdiagonal(const Matrix& m);

/// Lower Cholesky factor L with L L^T equal to the source matrix.
class CholeskyFactor {
 public:
  std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.rows()); }
  const Matrix& lower() const noexcept { return lower_; }

 private:
  friend CholeskyFactor cholesky(const SymMatrix& m);
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}
  Matrix lower_;
};

/// Blocked right-looking Cholesky. Throws NotPositiveDefinite with the index
/// of the first pivot that is not strictly positive and finite.
CholeskyFactor cholesky(const SymMatrix& m);
/// Y with (L L^T) Y = b, via two triangular solves.
Matrix solve_spd(const CholeskyFactor& f, const Matrix& b);
/// 2 * sum_i log(L_ii).
double logdet(const CholeskyFactor& f);
/// (L L^T)^{-1}, symmetrized.
SymMatrix inverse(const CholeskyFactor& f);

struct JacobiOptions {
  std::size_t max_sweeps = 100;
  /// Stop when off-diagonal Frobenius mass < rel_tol * ||m||_F.
  double rel_tol = 1e-12;
};

struct EigenDecomposition {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition. Throws ConvergenceError carrying the
/// remaining off-diagonal mass if the sweep cap is hit.
EigenDecomposition jacobi_eigen(const SymMatrix& m, const JacobiOptions& opts = {});

/// sqrt(k^2 + alpha I) through the eigendecomposition of k.
SymMatrix sqrt_eigen(const SymMatrix& k, double alpha, const JacobiOptions& opts = {});

struct NewtonSqrtOptions {
  double rel_tol = 1e-6;
  std::size_t max_iter = 50;
  /// Carry Z^j = C^{-1} X^j alongside X^j (Denman-Beavers coupling). Same
  /// iterates in exact arithmetic; without it, rounding error that does not
  /// commute with k grows by up to sqrt(cond(C)) / 2 per step.
  bool coupled = true;
};

struct NewtonSqrtReport {
  std::size_t iterations = 0;
  double final_relative_change = 0.0;
  bool converged = false;
};

struct NewtonSqrtResult {
  SymMatrix root;
  NewtonSqrtReport report;
};

/// Called with (j, X^j) after each Newton update, j starting at 1.
using NewtonObserver = std::function<void(std::size_t, const SymMatrix&)>;

/// sqrt(C), C = k^2 + alpha I, by the Newton iteration
///   X^{j+1} = (X^j + (X^j)^{-1} C) / 2,   X^0 = sqrt(alpha) I.
///
/// Each iterate commutes with k and is SPD. The plain form applies the
/// inverse as a Cholesky solve against C; the coupled form runs
///   X^{j+1} = (X^j + (Z^j)^{-1}) / 2,  Z^{j+1} = (Z^j + (X^j)^{-1}) / 2,
/// from Z^0 = sqrt(alpha) C^{-1}. Stops once
/// ||X^{j+1} - X^j||_F / ||X^{j+1}||_F < rel_tol.
/// Hitting max_iter is reported through `converged`, not thrown; a non-finite
/// iterate throws NonFiniteError.
NewtonSqrtResult sqrt_newton(const SymMatrix& k, double alpha, const NewtonSqrtOptions& opts = {},
                             const NewtonObserver& observer = {});

}  // namespace sbgm
