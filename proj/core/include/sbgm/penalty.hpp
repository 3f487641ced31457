#pragma once

#include <string>
#include <string_view>

#include "sbgm/symmat.hpp"

namespace sbgm {

enum class PenaltyKind { L1OffDiagonal, ElasticNetOffDiagonal, RidgeOffDiagonal };

std::string_view to_string(PenaltyKind kind);
/// Accepts the CLI spellings "l1", "elastic-net" and "ridge".
PenaltyKind parse_penalty_kind(std::string_view name);

/// Separable penalty on the off-diagonal entries of a symmetric matrix.
///
/// All three kinds are the elastic net
///   l1_weight * sum_{i!=j} |a_ij| + (l2_weight / 2) * sum_{i!=j} a_ij^2
/// with the weights taken from `lambda` (and `ratio` for the elastic net).
/// The diagonal is never penalized.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::L1OffDiagonal;
  double lambda = 0.0;
  /// Elastic-net share of lambda given to the l1 part; ignored otherwise.
  double ratio = 0.5;

  static PenaltySpec l1(double lambda) { return {PenaltyKind::L1OffDiagonal, lambda, 1.0}; }
  static PenaltySpec elastic_net(double lambda, double ratio) {
    return {PenaltyKind::ElasticNetOffDiagonal, lambda, ratio};
  }
  static PenaltySpec ridge(double lambda) { return {PenaltyKind::RidgeOffDiagonal, lambda, 0.0}; }

  double l1_weight() const;
  double l2_weight() const;
  /// Throws InvalidArgument on lambda < 0 or ratio outside [0, 1].
  void validate() const;
};

/// Penalty value, lambda included.
double value(const PenaltySpec& spec, const SymMatrix& a);

/// sgn(v) max(0, |v| - tau).
double soft_threshold(double v, double tau);
/// Entrywise soft thresholding of the off-diagonal; diagonal copied.
SymMatrix soft_threshold(const SymMatrix& v, double tau);

/// Minimizer over a scalar off-diagonal entry of
///   l1 |a| + (l2 / 2) a^2 + (mu / 2) (a - v)^2.
double prox(const PenaltySpec& spec, double v, double mu);
/// argmin_A value(spec, A) + (mu / 2) ||A - v||_F^2.
SymMatrix prox(const PenaltySpec& spec, const SymMatrix& v, double mu);

}  // namespace sbgm
