// gauss_ts: command-line driver for Gaussian Thompson sampling experiments.
//
//   gauss_ts run <spec.yaml|manifest.json>
//   gauss_ts verify <lemma1|lemma2|lemma3|posterior|all> [--seed N]
//   gauss_ts separation --alphas a,b,c --horizon T --reps R --seed N
//
// Global options: --jobs N (worker threads, default: all cores), --out DIR
// (output directory, default $GAUSS_TS_OUT or the current directory).
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gauss_ts/harness/report.hpp"
#include "gauss_ts/harness/spec.hpp"
#include "gauss_ts/harness/verify.hpp"

namespace {

using namespace gauss_ts;
using namespace gauss_ts::harness;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerify = 3;

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void print_suite(const SuiteReport& rep, bool verbose) {
  std::printf("== %s: %zu checks, %zu failed, %.2f s\n", rep.suite.c_str(), rep.rows.size(),
              rep.failures(), rep.seconds);
  std::printf("%-40s %12s %12s %12s %12s  %s\n", "point", "lower", "observed", "upper", "margin",
              "result");
  const bool condensed = !verbose && rep.rows.size() > 100;
  const CheckRow* tightest = nullptr;
  for (const auto& r : rep.rows) {
    if (!tightest || r.margin() < tightest->margin()) tightest = &r;
    if (condensed && r.pass()) continue;
    std::printf("%-40s %12s %12s %12s %12s  %s\n", r.point.c_str(), fmt_num(r.lower).c_str(),
                fmt_num(r.value).c_str(), fmt_num(r.upper).c_str(), fmt_num(r.margin()).c_str(),
                r.pass() ? "PASS" : "FAIL");
  }
  if (condensed && tightest) {
    std::printf("(%zu passing rows omitted; tightest: %s, margin %s)\n",
                rep.rows.size() - rep.failures(), tightest->point.c_str(),
                fmt_num(tightest->margin()).c_str());
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("GAUSS_TS_OUT"); env && *env) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling for Gaussian bandits with unknown mean and variance"};
  app.require_subcommand(1);

  unsigned jobs = 0;
  std::string out_dir;
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", out_dir, "output directory (default: $GAUSS_TS_OUT or .)");

  auto* run = app.add_subcommand("run", "run an experiment spec");
  std::string spec_path;
  run->add_option("spec", spec_path, "YAML spec or manifest JSON")->required();

  auto* verify = app.add_subcommand("verify", "run a numerical verification suite");
  std::string suite;
  std::uint64_t seed = 1;
  double shrink = 1.0;
  bool verbose = false;
  verify->add_option("suite", suite, "lemma1 | lemma2 | lemma3 | posterior | all")
      ->required()
      ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3", "posterior", "all"}));
  verify->add_option("--seed", seed, "seed for Monte Carlo suites")->capture_default_str();
  verify->add_option("--shrink-bound", shrink,
                     "debug: divide the deviation bounds by this factor (negative control)");
  verify->add_flag("--verbose", verbose, "print every row");

  auto* sep = app.add_subcommand("separation", "prior-dependence experiment on two arms");
  SeparationConfig scfg;
  sep->add_option("--alphas", scfg.alphas, "comma-separated prior exponents")->delimiter(',');
  sep->add_option("--horizon", scfg.horizon)->capture_default_str();
  sep->add_option("--reps", scfg.reps)->capture_default_str();
  sep->add_option("--seed", scfg.seed)->capture_default_str();
  sep->add_option("--known-mean", scfg.known_mean, "mean of the known arm")->capture_default_str();
  sep->add_option("--known-sigma2", scfg.sigma2_known, "variance of the known arm")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (out_dir.empty()) out_dir = default_out_dir();

  try {
    if (*run) {
      const auto spec = load_spec_file(spec_path);
      const auto res = run_experiment(spec, out_dir, jobs);
      const auto& s = res.summary;
      std::printf("%s: T=%llu reps=%llu mean regret %s (stderr %s), regret/lnT %s\n",
                  spec.name.c_str(), static_cast<unsigned long long>(spec.horizon),
                  static_cast<unsigned long long>(spec.reps), fmt_num(s.mean.back()).c_str(),
                  fmt_num(s.std_error.back()).c_str(),
                  fmt_num(s.mean.back() / std::log(static_cast<double>(spec.horizon))).c_str());
      std::printf("wrote %s\n      %s\n      %s\n", res.csv.string().c_str(),
                  res.reps_csv.string().c_str(), res.manifest.string().c_str());
      return 0;
    }
    if (*verify) {
      if (!(shrink > 0.0)) throw config_error("--shrink-bound must be > 0");
      std::vector<SuiteReport> reports;
      if (suite == "lemma1" || suite == "all") reports.push_back(verify_lemma1());
      if (suite == "lemma2" || suite == "all") reports.push_back(verify_lemma2(seed, shrink));
      if (suite == "lemma3" || suite == "all") reports.push_back(verify_lemma3());
      if (suite == "posterior" || suite == "all") reports.push_back(verify_posterior(seed));
      bool ok = true;
      for (const auto& r : reports) {
        print_suite(r, verbose);
        ok = ok && r.passed();
      }
      for (const auto& r : reports) {
        for (const auto& row : r.rows) {
          if (!row.pass()) {
            std::fprintf(stderr, "FAILED %s at %s\n", r.suite.c_str(), row.point.c_str());
          }
        }
      }
      std::printf("%s\n", ok ? "ALL PASS" : "FAILURES");
      return ok ? 0 : kExitVerify;
    }
    if (*sep) {
      const auto rows = run_separation(scfg, out_dir, jobs);
      std::printf("%8s %10s %14s %12s %12s\n", "alpha", "exponent", "mean_regret", "stderr",
                  "regret/lnT");
      for (const auto& r : rows) {
        const double t = static_cast<double>(r.summary.checkpoints.back());
        std::printf("%8s %10s %14s %12s %12s\n", fmt_num(r.alpha).c_str(),
                    fmt_num(r.exponent).c_str(), fmt_num(r.summary.mean.back()).c_str(),
                    fmt_num(r.summary.std_error.back()).c_str(),
                    fmt_num(r.summary.mean.back() / std::log(t)).c_str());
      }
      std::printf("wrote %s\n", (fs::path(out_dir) / "separation_summary.csv").string().c_str());
      return 0;
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
