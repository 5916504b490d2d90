#pragma once

// Experiment execution and output files.
//
// Summary CSV (one row per checkpoint):
//   #schema=1
//   T,mean_regret,stderr,mean_regret_over_lnT,lower_bound_coef,lemma5_bound
// Per-replication CSV (long format):
//   #schema=1
//   rep,T,regret
// Empty cells mean "not applicable" (ln 1 = 0, no unique optimum, no epsilon).
// Numbers use the shortest representation that round-trips.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gauss_ts/bandit.hpp"
#include "gauss_ts/harness/format.hpp"
#include "gauss_ts/harness/spec.hpp"
#include "gauss_ts/theory.hpp"

#ifndef GAUSS_TS_VERSION
#define GAUSS_TS_VERSION "unknown"
#endif

namespace gauss_ts::harness {

namespace fs = std::filesystem;

inline constexpr const char* kSchemaLine = "#schema=1";
inline constexpr const char* kSummaryHeader =
    "T,mean_regret,stderr,mean_regret_over_lnT,lower_bound_coef,lemma5_bound";
inline constexpr const char* kRepsHeader = "rep,T,regret";

inline std::string summary_csv(const ReplicationSummary& s, const Environment& env, double alpha,
                               std::optional<double> lemma5_epsilon) {
  std::optional<double> coef;
  if (env.has_unique_optimum()) coef = lower_bound_coefficient(env).total;
  std::ostringstream out;
  out << kSchemaLine << '\n' << kSummaryHeader << '\n';
  for (std::size_t c = 0; c < s.checkpoints.size(); ++c) {
    const auto t = s.checkpoints[c];
    out << t << ',' << format_double(s.mean[c]) << ',' << format_double(s.std_error[c]) << ',';
    if (t > 1) out << format_double(s.mean[c] / std::log(static_cast<double>(t)));
    out << ',';
    if (coef) out << format_double(*coef);
    out << ',';
    if (lemma5_epsilon) {
      out << format_double(
          lemma5_upper_bound(env, alpha, *lemma5_epsilon, static_cast<double>(t)));
    }
    out << '\n';
  }
  return out.str();
}

inline std::string reps_csv(const ReplicationSummary& s) {
  std::ostringstream out;
  out << kSchemaLine << '\n' << kRepsHeader << '\n';
  for (std::size_t r = 0; r < s.per_rep.size(); ++r) {
    for (std::size_t c = 0; c < s.checkpoints.size(); ++c) {
      out << r << ',' << s.checkpoints[c] << ',' << format_double(s.per_rep[r][c]) << '\n';
    }
  }
  return out.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::vector<std::vector<std::string>> read_table(const std::string& text,
                                                        const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(kSchemaLine, 0) != 0) {
    throw std::runtime_error("CSV: missing #schema=1 line");
  }
  if (!std::getline(in, line) || line != header) throw std::runtime_error("CSV: bad header");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split(line));
  }
  return rows;
}

}  // namespace detail

/// One parsed summary row; optional cells are NaN when empty.
struct SummaryRow {
  std::uint64_t t;
  double mean_regret;
  double std_error;
  double mean_regret_over_lnt;
  double lower_bound_coef;
  double lemma5_bound;
};

inline std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::vector<SummaryRow> out;
  for (const auto& cells : detail::read_table(text, kSummaryHeader)) {
    if (cells.size() != 6) throw std::runtime_error("summary CSV: expected 6 columns");
    auto num = [](const std::string& s) {
      double v = std::nan("");
      if (!s.empty() && !parse_double(s, v)) throw std::runtime_error("summary CSV: bad number");
      return v;
    };
    SummaryRow r{};
    if (!parse_uint(cells[0], r.t)) throw std::runtime_error("summary CSV: bad T");
    r.mean_regret = num(cells[1]);
    r.std_error = num(cells[2]);
    r.mean_regret_over_lnt = num(cells[3]);
    r.lower_bound_coef = num(cells[4]);
    r.lemma5_bound = num(cells[5]);
    out.push_back(r);
  }
  return out;
}

/// Rebuilds the replication matrix from a per-replication CSV and reduces it.
inline ReplicationSummary reaggregate_reps_csv(const std::string& text) {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<double>> per_rep;
  for (const auto& cells : detail::read_table(text, kRepsHeader)) {
    std::uint64_t rep, t;
    double regret;
    if (cells.size() != 3 || !parse_uint(cells[0], rep) || !parse_uint(cells[1], t) ||
        !parse_double(cells[2], regret)) {
      throw std::runtime_error("reps CSV: malformed row");
    }
    if (rep == per_rep.size()) per_rep.emplace_back();
    if (rep + 1 != per_rep.size()) throw std::runtime_error("reps CSV: rows out of order");
    if (rep == 0) checkpoints.push_back(t);
    per_rep.back().push_back(regret);
  }
  if (per_rep.empty()) throw std::runtime_error("reps CSV: no rows");
  return aggregate(std::move(checkpoints), std::move(per_rep));
}

struct RunResult {
  ReplicationSummary summary;
  fs::path csv;
  fs::path reps_csv;
  fs::path manifest;
  double wall_seconds = 0.0;
};

inline fs::path resolve_output(const fs::path& out_dir, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : out_dir / p;
}

/// Runs the experiment and writes the summary CSV, the per-replication CSV and
/// the manifest. CSV contents depend only on the spec, never on `jobs`.
inline RunResult run_experiment(const ExperimentSpec& spec, const fs::path& out_dir,
                                unsigned jobs) {
  const auto start = std::chrono::steady_clock::now();
  const auto env = spec.environment();
  const auto policy = spec.policy();

  RunResult res;
  res.summary =
      run_replications(env, policy, spec.horizon, spec.reps, spec.seed, spec.checkpoints, jobs);
  res.csv = resolve_output(out_dir, spec.outputs.csv);
  res.reps_csv = resolve_output(out_dir, spec.outputs.reps_csv);
  res.manifest = resolve_output(out_dir, spec.outputs.manifest);
  write_file(res.csv, summary_csv(res.summary, env, spec.alpha, spec.lemma5_epsilon));
  write_file(res.reps_csv, reps_csv(res.summary));
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const nlohmann::json manifest = {
      {"manifest_schema", 1},
      {"version", GAUSS_TS_VERSION},
      {"spec", spec_to_json(spec)},
      {"wall_time_seconds", res.wall_seconds},
      {"jobs", jobs},
      {"outputs",
       {{"csv", res.csv.string()},
        {"reps_csv", res.reps_csv.string()},
        {"manifest", res.manifest.string()}}}};
  write_file(res.manifest, manifest.dump(2) + "\n");
  return res;
}

/// Least-squares slope of ln(mean regret) against ln T over checkpoints in
/// [horizon / 10^decades, horizon]. Checkpoints with zero mean regret are skipped.
inline double growth_exponent(const ReplicationSummary& s, double decades = 2.0) {
  const double t_max = static_cast<double>(s.checkpoints.back());
  const double t_min = t_max / std::pow(10.0, decades);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t c = 0; c < s.checkpoints.size(); ++c) {
    const double t = static_cast<double>(s.checkpoints[c]);
    if (t < t_min * (1.0 - 1e-12) || !(s.mean[c] > 0.0)) continue;
    const double x = std::log(t);
    const double y = std::log(s.mean[c]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::runtime_error("growth_exponent: fewer than two usable checkpoints");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// Two-armed known-arm configuration: arm 0 ~ N(0, 1) learned by the policy,
/// arm 1 ~ N(known_mean, sigma2_known) with its mean given to the policy.
struct SeparationConfig {
  std::vector<double> alphas;
  std::uint64_t horizon = 100000;
  std::uint64_t reps = 2000;
  std::uint64_t seed = 1;
  double known_mean = -0.5;
  double sigma2_known = 1.0;
};

struct SeparationRow {
  double alpha;
  double exponent;
  ReplicationSummary summary;
  fs::path csv;
};

inline Environment separation_environment(const SeparationConfig& cfg) {
  return Environment({{0.0, 1.0}, {cfg.known_mean, cfg.sigma2_known}});
}

inline std::vector<SeparationRow> run_separation(const SeparationConfig& cfg,
                                                 const fs::path& out_dir, unsigned jobs) {
  if (cfg.alphas.empty()) throw config_error("alpha list must be nonempty");
  if (cfg.reps < 1) throw config_error("reps must be ≥ 1");
  if (!(cfg.known_mean < 0.0)) throw config_error("known mean must be below the optimal mean 0");
  if (!(cfg.sigma2_known > 0.0)) throw config_error("sigma2 of the known arm must be > 0");
  const auto env = separation_environment(cfg);
  std::vector<SeparationRow> rows;
  for (double alpha : cfg.alphas) {
    const auto policy = PolicySpec::thompson_with_known_arms(alpha, {{1, cfg.known_mean}});
    if (cfg.horizon < initialization_rounds(env, policy) || cfg.horizon < 100) {
      throw config_error("horizon too small for alpha " + format_double(alpha));
    }
    SeparationRow row{alpha, 0.0, {}, {}};
    row.summary = run_replications(env, policy, cfg.horizon, cfg.reps, cfg.seed,
                                   log_checkpoints(cfg.horizon), jobs);
    row.exponent = growth_exponent(row.summary);
    row.csv = out_dir / ("separation_alpha_" + format_double(alpha) + ".csv");
    write_file(row.csv, summary_csv(row.summary, env, alpha, std::nullopt));
    rows.push_back(std::move(row));
  }
  std::ostringstream sum;
  sum << kSchemaLine << '\n'
      << "alpha,growth_exponent,final_T,final_mean_regret,final_stderr,"
         "final_mean_regret_over_lnT,lower_bound_coef\n";
  const double coef = lower_bound_coefficient(env).total;
  for (const auto& r : rows) {
    const auto t = r.summary.checkpoints.back();
    sum << format_double(r.alpha) << ',' << format_double(r.exponent) << ',' << t << ','
        << format_double(r.summary.mean.back()) << ','
        << format_double(r.summary.std_error.back()) << ','
        << format_double(r.summary.mean.back() / std::log(static_cast<double>(t))) << ','
        << format_double(coef) << '\n';
  }
  write_file(out_dir / "separation_summary.csv", sum.str());
  return rows;
}

}  // namespace gauss_ts::harness
