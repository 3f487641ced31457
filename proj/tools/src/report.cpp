#include "sbgm/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "sbgm/errors.hpp"

namespace sbgm {
namespace {

using nlohmann::json;

// JSON has no infinity; non-finite values are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json solver_to_json(const SolverReport& s) {
  const std::size_t kept = std::min(s.energy_trace.size(), kMaxSerializedTrace);
  json trace = json::array();
  for (std::size_t i = 0; i < kept; ++i) trace.push_back(number(s.energy_trace[i]));
  return {
      {"iterations", s.iterations},
      {"converged", s.converged},
      {"final_energy", number(s.final_energy)},
      {"primal_residual", number(s.primal_residual)},
      {"dual_residual", number(s.dual_residual)},
      {"energy_change", number(s.energy_change)},
      {"kkt_residual", number(s.kkt_residual)},
      {"newton_iters_total", s.newton_iters_total},
      {"newton_fallbacks", s.newton_fallbacks},
      {"wall_time_seconds", s.wall_time_seconds},
      {"energy_trace", trace},
      {"energy_trace_truncated", kept < s.energy_trace.size()},
  };
}

SolverReport solver_from_json(const json& j) {
  SolverReport s;
  s.iterations = j.at("iterations").get<std::size_t>();
  s.converged = j.at("converged").get<bool>();
  s.final_energy = number_or_inf(j.at("final_energy"));
  s.primal_residual = number_or_inf(j.at("primal_residual"));
  s.dual_residual = number_or_inf(j.at("dual_residual"));
  s.energy_change = number_or_inf(j.at("energy_change"));
  s.kkt_residual = number_or_inf(j.at("kkt_residual"));
  s.newton_iters_total = j.at("newton_iters_total").get<std::size_t>();
  s.newton_fallbacks = j.value("newton_fallbacks", std::size_t{0});
  s.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  for (const auto& e : j.at("energy_trace")) s.energy_trace.push_back(number_or_inf(e));
  return s;
}

}  // namespace

nlohmann::json to_json(const RunReport& r) {
  json config = {
      {"lambda", r.config.lambda ? json(*r.config.lambda) : json(nullptr)},
      {"mu", r.config.mu},
      {"tol", r.config.tol},
      {"max_iter", r.config.max_iter},
      {"penalty", r.config.penalty},
      {"ratio", r.config.ratio},
      {"seeds", r.config.seeds},
  };
  json input = {
      {"input_path", r.input.input_path}, {"input_kind", r.input.input_kind}, {"truth_path", r.input.truth_path},
      {"p", r.input.p},                   {"n", r.input.n},
  };
  json sqrt_rows = json::array();
  for (const auto& row : r.sqrt_bench) {
    sqrt_rows.push_back({{"p", row.p},
                         {"seed", row.seed},
                         {"alpha", row.alpha},
                         {"newton_seconds", row.newton_seconds},
                         {"eigen_seconds", row.eigen_seconds},
                         {"newton_iters", row.newton_iters},
                         {"relative_difference", number(row.relative_difference)}});
  }
  json solver_rows = json::array();
  for (const auto& row : r.solver_bench) {
    solver_rows.push_back({{"p", row.p},
                           {"n", row.n},
                           {"seed", row.seed},
                           {"lambda", row.lambda},
                           {"iterations", row.iterations},
                           {"converged", row.converged},
                           {"seconds", row.seconds},
                           {"kkt_residual", number(row.kkt_residual)}});
  }
  json out = {
      {"schema_version", r.schema_version},
      {"command", r.command},
      {"config", config},
      {"input", input},
      {"solver", r.solver ? solver_to_json(*r.solver) : json(nullptr)},
      {"metrics", nullptr},
      {"sqrt_bench", sqrt_rows},
      {"solver_bench", solver_rows},
  };
  if (r.metrics) {
    out["metrics"] = {{"relative_error", number(r.metrics->relative_error)},
                      {"precision", r.metrics->precision},
                      {"recall", r.metrics->recall},
                      {"f1", r.metrics->f1}};
  }
  return out;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != 1) throw Error("unsupported report schema_version " + std::to_string(r.schema_version));
  r.command = j.at("command").get<std::string>();

  const json& c = j.at("config");
  if (!c.at("lambda").is_null()) r.config.lambda = c.at("lambda").get<double>();
  r.config.mu = c.at("mu").get<double>();
  r.config.tol = c.at("tol").get<double>();
  r.config.max_iter = c.at("max_iter").get<std::size_t>();
  r.config.penalty = c.at("penalty").get<std::string>();
  r.config.ratio = c.at("ratio").get<double>();
  r.config.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();

  const json& in = j.at("input");
  r.input.input_path = in.at("input_path").get<std::string>();
  r.input.input_kind = in.at("input_kind").get<std::string>();
  r.input.truth_path = in.at("truth_path").get<std::string>();
  r.input.p = in.at("p").get<std::size_t>();
  r.input.n = in.at("n").get<std::size_t>();

  if (!j.at("solver").is_null()) r.solver = solver_from_json(j.at("solver"));
  if (!j.at("metrics").is_null()) {
    const json& m = j.at("metrics");
    r.metrics = RecoveryMetrics{number_or_inf(m.at("relative_error")), m.at("precision").get<double>(),
                                m.at("recall").get<double>(), m.at("f1").get<double>()};
  }
  for (const auto& row : j.at("sqrt_bench")) {
    r.sqrt_bench.push_back({row.at("p").get<std::size_t>(), row.at("seed").get<std::uint64_t>(),
                            row.at("alpha").get<double>(), row.at("newton_seconds").get<double>(),
                            row.at("eigen_seconds").get<double>(), row.at("newton_iters").get<std::size_t>(),
                            number_or_inf(row.at("relative_difference"))});
  }
  for (const auto& row : j.at("solver_bench")) {
    r.solver_bench.push_back({row.at("p").get<std::size_t>(), row.at("n").get<std::size_t>(),
                              row.at("seed").get<std::uint64_t>(), row.at("lambda").get<double>(),
                              row.at("iterations").get<std::size_t>(), row.at("converged").get<bool>(),
                              row.at("seconds").get<double>(), number_or_inf(row.at("kkt_residual"))});
  }
  return r;
}

void write_report(const std::filesystem::path& path, const RunReport& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report " + path.string());
  out << to_json(r).dump(2) << '\n';
  if (!out) throw Error("write failed for report " + path.string());
}

RunReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open report " + path.string());
  try {
    return report_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed report " + path.string() + ": " + e.what());
  }
}

}  // namespace sbgm
