#include "sbgm/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbgm/datagen.hpp"
#include "sbgm/errors.hpp"
#include "sbgm/io.hpp"

namespace sbgm::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct LoadedInput {
  SymMatrix s;
  std::string kind;
  std::size_t n = 0;
};

LoadedInput load_input(const EstimateOptions& opts) {
  std::string format = opts.format;
  if (format == "auto") {
    const std::string ext = opts.input.extension().string();
    if (ext == ".csv") {
      format = "csv";
    } else if (ext == ".mtx") {
      format = "mtx";
    } else {
      throw InvalidArgument("cannot infer input format from '" + opts.input.string() + "'; pass --format csv|mtx");
    }
  }
  if (format == "csv") {
    const SampleMatrix x = io::read_samples_csv(opts.input);
    return {empirical_covariance(x), "samples", x.n()};
  }
  if (format == "mtx") return {io::read_matrix_market(opts.input), "covariance", 0};
  throw InvalidArgument("unknown --format '" + format + "'");
}

double lambda_from_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open manifest " + path.string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.contains("suggested_lambda") || j.at("suggested_lambda").is_null()) {
      throw InvalidArgument("manifest " + path.string() + " has no suggested_lambda");
    }
    return j.at("suggested_lambda").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed manifest " + path.string() + ": " + e.what());
  }
}

PenaltySpec penalty_from(const std::string& name, double lambda, double ratio) {
  PenaltySpec spec{parse_penalty_kind(name), lambda, ratio};
  spec.validate();
  return spec;
}

}  // namespace

std::uint64_t sample_seed_for(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
  SolverConfig cfg;
  LoadedInput input;
  std::optional<SymMatrix> truth;
  try {
    double lambda = 0.0;
    if (opts.lambda) {
      lambda = *opts.lambda;
    } else if (opts.manifest) {
      lambda = lambda_from_manifest(*opts.manifest);
    } else {
      throw InvalidArgument("either --lambda or --manifest is required");
    }
    cfg.penalty = penalty_from(opts.penalty, lambda, opts.ratio);
    cfg.mu = opts.mu;
    cfg.rel_tol = opts.tol;
    cfg.max_outer_iter = opts.max_iter;
    cfg.validate();
    input = load_input(opts);
    if (opts.truth) {
      truth = io::read_matrix_market(*opts.truth);
      if (truth->dim() != input.s.dim()) throw DimensionMismatch("truth matrix does not match the input dimension");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  SolverResult result;
  try {
    result = run(input.s, cfg);
  } catch (const NotPositiveDefinite& e) {
    err << "error: solver failed: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const NonFiniteError& e) {
    err << "error: solver failed: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  RunReport report;
  report.command = "estimate";
  report.config = {cfg.penalty.lambda, cfg.mu, cfg.rel_tol, cfg.max_outer_iter, opts.penalty, opts.ratio, {}};
  report.input = {opts.input.string(), input.kind, opts.truth ? opts.truth->string() : "", input.s.dim(), input.n};
  report.solver = result.report;
  if (truth) {
    const SupportMetrics sm = support_metrics(result.estimate, *truth);
    report.metrics = RecoveryMetrics{relative_error(result.estimate, *truth), sm.precision, sm.recall, sm.f1};
  }

  try {
    if (opts.output) io::write_matrix_market_coordinate(*opts.output, result.estimate);
    if (opts.report) write_report(*opts.report, report);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  const SolverReport& r = result.report;
  out << (r.converged ? "converged" : "iteration cap reached") << " after " << r.iterations
      << " iterations; energy " << r.final_energy << ", primal residual " << r.primal_residual
      << ", dual residual " << r.dual_residual << ", kkt residual " << r.kkt_residual << ", off-diagonal nnz "
      << offdiagonal_nnz(result.estimate) << '\n';
  if (report.metrics) {
    out << "relative error " << report.metrics->relative_error << ", support f1 " << report.metrics->f1 << '\n';
  }
  return r.converged ? kExitOk : kExitIterationCap;
}

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.p < 2) throw InvalidArgument("--p must be at least 2");
    if (opts.n < 1) throw InvalidArgument("--n must be at least 1");
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) throw Error("cannot create " + opts.out_dir.string() + ": " + ec.message());

    const GroundTruthModel model = generate_sparse_precision(opts.p, opts.seed);
    const SampleMatrix x = sample_gaussian(model, opts.n, sample_seed_for(opts.seed));

    nlohmann::json manifest = {
        {"seed", opts.seed},
        {"sample_seed", sample_seed_for(opts.seed)},
        {"p", opts.p},
        {"n", opts.n},
        {"nnz", model.nnz_offdiag},
        {"lambda_min", model.min_eigenvalue},
        {"identity_shift", model.identity_shift},
        {"precision_file", kPrecisionFile},
        {"samples_file", kSamplesFile},
        {"suggested_lambda", nullptr},
    };
    if (opts.suggest_lambda) {
      SolverConfig cfg;
      cfg.mu = opts.mu;
      const LambdaSearch search = lambda_for_target_support(empirical_covariance(x), model.nnz_offdiag, cfg);
      manifest["suggested_lambda"] = search.lambda;
      manifest["suggested_lambda_nnz"] = search.nnz;
      manifest["mu"] = opts.mu;
    }

    io::write_matrix_market_coordinate(opts.out_dir / kPrecisionFile, model.precision, 0.0);
    io::write_samples_csv(opts.out_dir / kSamplesFile, x);
    std::ofstream mf(opts.out_dir / kManifestFile, std::ios::binary | std::ios::trunc);
    if (!mf) throw Error("cannot write " + (opts.out_dir / kManifestFile).string());
    mf << manifest.dump(2) << '\n';
    if (!mf) throw Error("write failed for " + (opts.out_dir / kManifestFile).string());

    out << "wrote " << opts.out_dir.string() << ": p=" << opts.p << " n=" << opts.n << " nnz=" << model.nnz_offdiag
        << " lambda_min=" << model.min_eigenvalue << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

SqrtBenchRow bench_sqrt(std::size_t p, std::uint64_t seed, double mu) {
  const SymMatrix k = random_symmetric_gaussian(p, seed);
  SqrtBenchRow row;
  row.p = p;
  row.seed = seed;
  row.alpha = 4.0 * mu;

  auto t0 = Clock::now();
  const NewtonSqrtResult newton = sqrt_newton(k, row.alpha);
  row.newton_seconds = seconds_since(t0);
  t0 = Clock::now();
  const SymMatrix reference = sqrt_eigen(k, row.alpha);
  row.eigen_seconds = seconds_since(t0);

  row.newton_iters = newton.report.iterations;
  row.relative_difference = relative_error(newton.root, reference);
  return row;
}

SolverBenchRow bench_solver(std::size_t p, std::size_t n, std::uint64_t seed, const SolverConfig& base,
                            std::optional<double> lambda) {
  const GroundTruthModel model = generate_sparse_precision(p, seed);
  const SymMatrix s = empirical_covariance(sample_gaussian(model, n, sample_seed_for(seed)));
  SolverConfig cfg = base;
  cfg.penalty.lambda = lambda ? *lambda : lambda_for_target_support(s, model.nnz_offdiag, cfg).lambda;

  const SolverResult result = run(s, cfg);
  SolverBenchRow row;
  row.p = p;
  row.n = n;
  row.seed = seed;
  row.lambda = cfg.penalty.lambda;
  row.iterations = result.report.iterations;
  row.converged = result.report.converged;
  row.seconds = result.report.wall_time_seconds;
  row.kkt_residual = result.report.kkt_residual;
  return row;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  RunReport report;
  report.command = "bench";
  report.config.mu = opts.mu;
  report.config.lambda = opts.lambda;
  for (std::size_t r = 0; r < opts.repeats; ++r) report.config.seeds.push_back(opts.seed + r);
  report.input.input_kind = "synthetic";

  try {
    if (opts.repeats == 0) throw InvalidArgument("--repeats must be at least 1");
    if (opts.sqrt_sizes.empty() && (opts.solver_p.empty() || opts.solver_n.empty())) {
      throw InvalidArgument("nothing to do: give --sizes and/or both --solver-p and --solver-n");
    }
    if (!(opts.mu > 0.0)) throw InvalidArgument("--mu must be positive");

    out << std::setprecision(4);
    for (std::size_t p : opts.sqrt_sizes) {
      for (std::uint64_t seed : report.config.seeds) {
        const SqrtBenchRow row = bench_sqrt(p, seed, opts.mu);
        report.sqrt_bench.push_back(row);
        out << "sqrt p=" << row.p << " seed=" << row.seed << " newton " << row.newton_seconds << "s ("
            << row.newton_iters << " iters)  eigen " << row.eigen_seconds << "s  rel.diff "
            << row.relative_difference << '\n';
      }
    }

    SolverConfig base;
    base.mu = opts.mu;
    std::vector<std::size_t> ps = opts.solver_p;
    std::vector<std::size_t> ns = opts.solver_n;
    std::sort(ps.begin(), ps.end());
    std::sort(ns.begin(), ns.end());
    for (std::size_t p : ps) {
      for (std::size_t n : ns) {
        for (std::uint64_t seed : report.config.seeds) {
          const SolverBenchRow row = bench_solver(p, n, seed, base, opts.lambda);
          report.solver_bench.push_back(row);
          out << "solve p=" << row.p << " n=" << row.n << " seed=" << row.seed << " lambda " << row.lambda << "  "
              << row.seconds << "s (" << row.iterations << " iters" << (row.converged ? "" : ", not converged")
              << ")  kkt " << row.kkt_residual << '\n';
        }
      }
    }
    if (opts.report) write_report(*opts.report, report);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse inverse covariance estimation by split Bregman iteration"};
  app.require_subcommand(1);

  EstimateOptions est;
  std::string truth;
  std::string manifest;
  std::string output;
  std::string report;
  double lambda = 0.0;
  auto* estimate = app.add_subcommand("estimate", "Estimate a sparse precision matrix");
  estimate->add_option("--input", est.input, "Samples (.csv) or covariance (.mtx)")->required();
  estimate->add_option("--format", est.format, "Input format")->check(CLI::IsMember({"auto", "csv", "mtx"}));
  estimate->add_option("--truth", truth, "True precision matrix (MatrixMarket) for recovery metrics");
  auto* lambda_opt = estimate->add_option("--lambda", lambda, "Penalty weight")->check(CLI::NonNegativeNumber);
  estimate->add_option("--manifest", manifest, "gen manifest providing suggested_lambda");
  estimate->add_option("--mu", est.mu, "Augmented Lagrangian weight")->capture_default_str();
  estimate->add_option("--tol", est.tol, "Relative stopping threshold")->capture_default_str();
  estimate->add_option("--max-iter", est.max_iter, "Outer iteration cap")->capture_default_str();
  estimate->add_option("--penalty", est.penalty, "Penalty family")
      ->check(CLI::IsMember({"l1", "elastic-net", "ridge"}))
      ->capture_default_str();
  estimate->add_option("--ratio", est.ratio, "Elastic-net l1 share")->capture_default_str();
  estimate->add_option("--output", output, "Estimate (MatrixMarket coordinate symmetric)");
  estimate->add_option("--report", report, "Run report (JSON)");

  GenOptions gen;
  std::string out_dir;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic benchmark bundle");
  gen_cmd->add_option("--p", gen.p, "Dimension")->required();
  gen_cmd->add_option("--n", gen.n, "Sample count")->required();
  gen_cmd->add_option("--seed", gen.seed, "Model seed")->capture_default_str();
  gen_cmd->add_option("--out-dir,--output", out_dir, "Output directory")->required();
  gen_cmd->add_option("--mu", gen.mu, "mu used for the suggested lambda")->capture_default_str();
  gen_cmd->add_flag("!--no-suggest-lambda", gen.suggest_lambda, "Skip the support-matched lambda search");

  BenchOptions bench;
  std::string bench_report;
  double bench_lambda = 0.0;
  auto* bench_cmd = app.add_subcommand("bench", "Time Newton vs eigen square roots and solver scaling");
  bench_cmd->add_option("--sizes", bench.sqrt_sizes, "Square-root sizes p")->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "Seeds per configuration")->capture_default_str();
  bench_cmd->add_option("--solver-p", bench.solver_p, "Solver dimensions")->delimiter(',');
  bench_cmd->add_option("--solver-n", bench.solver_n, "Solver sample counts")->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed, "First seed")->capture_default_str();
  bench_cmd->add_option("--mu", bench.mu, "mu (alpha = 4 mu for the square roots)")->capture_default_str();
  auto* bench_lambda_opt = bench_cmd->add_option("--lambda", bench_lambda, "Fixed lambda (default: support-matched)");
  bench_cmd->add_option("--report", bench_report, "Run report (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  if (*estimate) {
    if (*lambda_opt) est.lambda = lambda;
    if (!truth.empty()) est.truth = truth;
    if (!manifest.empty()) est.manifest = manifest;
    if (!output.empty()) est.output = output;
    if (!report.empty()) est.report = report;
    return cmd_estimate(est, out, err);
  }
  if (*gen_cmd) {
    gen.out_dir = out_dir;
    return cmd_gen(gen, out, err);
  }
  if (*bench_lambda_opt) bench.lambda = bench_lambda;
  if (!bench_report.empty()) bench.report = bench_report;
  return cmd_bench(bench, out, err);
}

}  // namespace sbgm::cli
