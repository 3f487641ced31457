#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbgm/report.hpp"
#include "sbgm/solver.hpp"

namespace sbgm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitIterationCap = 2,
  kExitNumericalFailure = 3,
};

struct EstimateOptions {
  std::filesystem::path input;
  std::string format = "auto";  // auto | csv | mtx
  std::optional<std::filesystem::path> truth;
  std::optional<double> lambda;
  /// gen manifest supplying `suggested_lambda` when --lambda is absent.
  std::optional<std::filesystem::path> manifest;
  double mu = 0.5;
  double tol = 1e-4;
  std::size_t max_iter = 2000;
  std::string penalty = "l1";
  double ratio = 0.5;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> report;
};

struct GenOptions {
  std::size_t p = 0;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  double mu = 0.5;
  bool suggest_lambda = true;
};

struct BenchOptions {
  std::vector<std::size_t> sqrt_sizes;
  std::size_t repeats = 1;
  std::vector<std::size_t> solver_p;
  std::vector<std::size_t> solver_n;
  std::uint64_t seed = 1;
  double mu = 0.5;
  std::optional<double> lambda;
  std::optional<std::filesystem::path> report;
};

/// File names written by `gen` inside the output directory.
inline constexpr const char* kPrecisionFile = "precision.mtx";
inline constexpr const char* kSamplesFile = "samples.csv";
inline constexpr const char* kManifestFile = "manifest.json";

/// Seed used for the samples of a `gen` bundle with model seed `seed`.
std::uint64_t sample_seed_for(std::uint64_t seed);

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

/// Times sqrt_newton against sqrt_eigen on K = (B + B^T)/2, alpha = 4 mu.
SqrtBenchRow bench_sqrt(std::size_t p, std::uint64_t seed, double mu);

/// Builds a synthetic (p, n) instance, picks lambda (support-matched unless
/// given), then times a cold-start solve. Only run() is timed.
SolverBenchRow bench_solver(std::size_t p, std::size_t n, std::uint64_t seed, const SolverConfig& base,
                            std::optional<double> lambda = std::nullopt);

/// Parses argv with CLI11 and dispatches to the cmd_* functions.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbgm::cli
