#include "sbgm/penalty.hpp"

#include <cmath>
#include <string>

#include "sbgm/errors.hpp"

namespace sbgm {

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::L1OffDiagonal:
      return "l1";
    case PenaltyKind::ElasticNetOffDiagonal:
      return "elastic-net";
    case PenaltyKind::RidgeOffDiagonal:
      return "ridge";
  }
  return "unknown";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
  if (name == "l1") return PenaltyKind::L1OffDiagonal;
  if (name == "elastic-net") return PenaltyKind::ElasticNetOffDiagonal;
  if (name == "ridge") return PenaltyKind::RidgeOffDiagonal;
  throw InvalidArgument("unknown penalty '" + std::string(name) + "' (expected l1, elastic-net or ridge)");
}

double PenaltySpec::l1_weight() const {
  switch (kind) {
    case PenaltyKind::L1OffDiagonal:
      return lambda;
    case PenaltyKind::ElasticNetOffDiagonal:
      return ratio * lambda;
    case PenaltyKind::RidgeOffDiagonal:
      return 0.0;
  }
  return 0.0;
}

double PenaltySpec::l2_weight() const {
  switch (kind) {
    case PenaltyKind::L1OffDiagonal:
      return 0.0;
    case PenaltyKind::ElasticNetOffDiagonal:
      return (1.0 - ratio) * lambda;
    case PenaltyKind::RidgeOffDiagonal:
      return lambda;
  }
  return 0.0;
}

void PenaltySpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("penalty lambda must be finite and >= 0");
  if (kind == PenaltyKind::ElasticNetOffDiagonal && !(ratio >= 0.0 && ratio <= 1.0)) {
    throw InvalidArgument("elastic-net ratio must lie in [0, 1]");
  }
}

double value(const PenaltySpec& spec, const SymMatrix& a) {
  const double l1 = spec.l1_weight();
  const double l2 = spec.l2_weight();
  const Matrix& m = a.dense();
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == j) continue;
      abs_sum += std::abs(m(i, j));
      sq_sum += m(i, j) * m(i, j);
    }
  }
  return l1 * abs_sum + 0.5 * l2 * sq_sum;
}

double soft_threshold(double v, double tau) {
  const double mag = std::abs(v) - tau;
  if (mag <= 0.0) return 0.0;
  return std::copysign(mag, v);
}

SymMatrix soft_threshold(const SymMatrix& v, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("soft_threshold: tau must be >= 0");
  const std::size_t p = v.dim();
  SymMatrix out = v;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j + 1; i < p; ++i) out.set(i, j, soft_threshold(v(i, j), tau));
  }
  return out;
}

double prox(const PenaltySpec& spec, double v, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("prox: mu must be positive");
  const double l2 = spec.l2_weight();
  if (l2 == 0.0) return soft_threshold(v, spec.l1_weight() / mu);
  const double scale = mu + l2;
  return soft_threshold(mu * v / scale, spec.l1_weight() / scale);
}

SymMatrix prox(const PenaltySpec& spec, const SymMatrix& v, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("prox: mu must be positive");
  spec.validate();
  if (spec.kind == PenaltyKind::L1OffDiagonal) return soft_threshold(v, spec.lambda / mu);
  const std::size_t p = v.dim();
  SymMatrix out = v;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j + 1; i < p; ++i) out.set(i, j, prox(spec, v(i, j), mu));
  }
  return out;
}

}  // namespace sbgm
