#include <cmath>

#include "sbgm/errors.hpp"
#include "sbgm/symmat.hpp"

namespace sbgm {

NewtonSqrtResult sqrt_newton(const SymMatrix& k, double alpha, const NewtonSqrtOptions& opts,
                             const NewtonObserver& observer) {
  if (!(alpha > 0.0)) throw InvalidArgument("sqrt_newton: alpha must be positive");
  if (!(opts.rel_tol > 0.0)) throw InvalidArgument("sqrt_newton: rel_tol must be positive");

  const std::size_t p = k.dim();
  Matrix target = matmul(k, k);
  target.diagonal().array() += alpha;
  const SymMatrix c = SymMatrix::symmetrized(target);

  NewtonSqrtResult out{SymMatrix::identity(p) * std::sqrt(alpha), {}};
  SymMatrix& x = out.root;
  NewtonSqrtReport& report = out.report;
  SymMatrix z;
  if (opts.coupled) z = inverse(cholesky(c)) * std::sqrt(alpha);

  while (report.iterations < opts.max_iter) {
    Matrix next;
    if (opts.coupled) {
      const SymMatrix x_inv = inverse(cholesky(x));
      next = 0.5 * (x.dense() + inverse(cholesky(z)).dense());
      if (!next.allFinite()) throw NonFiniteError("sqrt_newton: non-finite iterate");
      z = SymMatrix::symmetrized(0.5 * (z.dense() + x_inv.dense()));
    } else {
      next = solve_spd(cholesky(x), c);
      next += x.dense();
      next *= 0.5;
      if (!next.allFinite()) throw NonFiniteError("sqrt_newton: non-finite iterate");
    }
    SymMatrix x_next = SymMatrix::symmetrized(next);

    const double denom = frobenius_norm(x_next);
    report.final_relative_change = denom > 0.0 ? frobenius_norm(x_next.dense() - x.dense()) / denom : 0.0;
    x = std::move(x_next);
    ++report.iterations;
    if (observer) observer(report.iterations, x);
    if (report.final_relative_change < opts.rel_tol) {
      report.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace sbgm
