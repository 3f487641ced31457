#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbgm/solver.hpp"

namespace sbgm {

/// Energy traces longer than this are cut when serialized.
inline constexpr std::size_t kMaxSerializedTrace = 10000;

struct ConfigEcho {
  std::optional<double> lambda;
  double mu = 0.5;
  double tol = 1e-4;
  std::size_t max_iter = 2000;
  std::string penalty = "l1";
  double ratio = 0.5;
  std::vector<std::uint64_t> seeds;
};

struct InputProvenance {
  std::string input_path;
  std::string input_kind;  // "samples", "covariance" or "synthetic"
  std::string truth_path;
  std::size_t p = 0;
  std::size_t n = 0;  // 0 when a covariance matrix was supplied
};

struct RecoveryMetrics {
  double relative_error = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Newton versus Jacobi square root of K^2 + alpha I on one random K.
struct SqrtBenchRow {
  std::size_t p = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double newton_seconds = 0.0;
  double eigen_seconds = 0.0;
  std::size_t newton_iters = 0;
  double relative_difference = 0.0;
};

/// One timed solve on a synthetic (p, n) instance; S is built untimed.
struct SolverBenchRow {
  std::size_t p = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  double kkt_residual = 0.0;
};

struct RunReport {
  int schema_version = 1;
  std::string command;
  ConfigEcho config;
  InputProvenance input;
  std::optional<SolverReport> solver;
  std::optional<RecoveryMetrics> metrics;
  std::vector<SqrtBenchRow> sqrt_bench;
  std::vector<SolverBenchRow> solver_bench;
};

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

void write_report(const std::filesystem::path& path, const RunReport& r);
RunReport read_report(const std::filesystem::path& path);

}  // namespace sbgm
