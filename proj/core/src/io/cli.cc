#include "ieoe/io/cli.h"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ieoe/error.h"
#include "ieoe/io/config.h"
#include "ieoe/io/csv.h"
#include "ieoe/io/experiment.h"
#include "ieoe/io/export.h"
#include "ieoe/io/plot.h"
#include "ieoe/reward_models.h"

namespace ieoe::io {
namespace {

namespace fs = std::filesystem;

struct RunOptions {
  std::string config;
  std::optional<int> workers;
  std::optional<std::string> out;
  bool fail_fast = false;
};

struct ReportOptions {
  std::string results;
  std::optional<double> z_max;
  double alpha = 0.7;
  std::optional<std::string> out;
  bool exclude_flagged = false;
  bool plot = true;
};

// Distinguishes the stage a failure came from; it decides the exit code.
struct StageError {
  int code;
  std::string message;
};

template <typename F>
auto Stage(int code, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEstimatorFailure) {
      throw StageError{kExitEstimatorFailure, e.what()};
    }
    throw StageError{code, e.what()};
  } catch (const std::exception& e) {
    throw StageError{code, e.what()};
  }
}

fs::path OutputDir(const std::optional<std::string>& flag,
                   const std::optional<fs::path>& configured) {
  if (flag) return *flag;
  if (configured) return *configured;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "ieoe_out";
}

void PrintSummary(std::ostream& out, const std::vector<EstimatorSummary>& s,
                  double z_max, double alpha) {
  fmt::print(out, "{:<14} {:>12} {:>12} {:>12} {:>12} {:>8}\n", "estimator",
             "mean", fmt::format("au_cdf@{:.3g}", z_max),
             fmt::format("cvar@{:.2g}", alpha), "std", "flagged");
  for (const auto& e : s) {
    fmt::print(out, "{:<14} {:>12.5g} {:>12.5g} {:>12.5g} {:>12.5g} {:>8}\n",
               e.estimator, e.scores.mean, e.scores.au_cdf, e.scores.cvar,
               e.scores.std, e.flagged);
  }
}

void WriteOutputs(const ResultSet& results, const fs::path& dir,
                  std::optional<double> z_max_opt, double alpha,
                  bool exclude_flagged, bool plot, bool write_errors,
                  std::ostream& out) {
  const double z_max = z_max_opt.value_or(AutoZMax(results));
  const auto summaries =
      SummarizeResults(results, z_max, alpha, exclude_flagged);
  Stage(kExitDataError, [&] {
    if (write_errors) {
      ExportResults(results, summaries, z_max, alpha, dir);
    } else {
      fs::create_directories(dir);
      WriteTextFile(dir / "summary.csv",
                    FormatSummaryCsv(results, summaries, z_max, alpha));
    }
    if (plot) RenderCdfPlot(results, z_max, dir / "cdf.svg", exclude_flagged);
    return 0;
  });
  PrintSummary(out, summaries, z_max, alpha);
  fmt::print(out, "wrote {}\n", dir.string());
}

int RunMode(ExperimentMode mode, const RunOptions& opt, std::ostream& out) {
  ExperimentConfig config = Stage(kExitConfigError, [&] {
    ExperimentConfig c = LoadConfig(opt.config);
    if (c.mode != mode) {
      throw Error(ErrorCode::kValidationError,
                  fmt::format("mode: config is for '{}' but the '{}' "
                              "subcommand was used",
                              ExperimentModeName(c.mode),
                              ExperimentModeName(mode)));
    }
    return c;
  });
  if (opt.workers) config.workers = *opt.workers;
  if (opt.fail_fast) config.fail_fast = true;

  const IeoeConfig ieoe = ToIeoeConfig(config);
  Stage(kExitConfigError, [&] {
    ValidateIeoeConfig(ieoe);
    return 0;
  });
  ResultSet results;
  if (mode == ExperimentMode::kRealWorld) {
    auto in = Stage(kExitDataError, [&] {
      return PrepareRealWorld(config.realworld,
                              NeedsLoggedPropensities(config));
    });
    bool binary = true;
    for (const auto& log : in.logs) binary = binary && HasBinaryRewards(log.feedback);
    auto est = Stage(kExitConfigError,
                     [&] { return BuildEstimators(config, binary); });
    results = Stage(kExitDataError, [&] {
      return RunAlgorithm2(ieoe, in.logs, in.policy_on_log, est);
    });
  } else {
    auto in = Stage(kExitDataError, [&] {
      return mode == ExperimentMode::kSynthetic
                 ? PrepareSynthetic(config.synthetic)
                 : PrepareClassification(config.classification);
    });
    auto est = Stage(kExitConfigError, [&] {
      return BuildEstimators(config, HasBinaryRewards(in.data));
    });
    results = Stage(kExitDataError, [&] {
      return RunAlgorithm1(ieoe, in.data, in.policies, est);
    });
  }
  WriteOutputs(results, OutputDir(opt.out, config.outputs.dir),
               config.outputs.z_max, config.outputs.cvar_alpha,
               config.outputs.exclude_flagged, config.outputs.plot, true, out);
  return kExitOk;
}

int RunReport(const ReportOptions& opt, std::ostream& out) {
  ResultSet results =
      Stage(kExitDataError, [&] { return LoadSquaredErrorsCsv(opt.results); });
  Stage(kExitConfigError, [&] {
    if (opt.z_max && !(*opt.z_max > 0.0)) {
      throw Error(ErrorCode::kNonpositiveZmax, "--z-max must be positive");
    }
    if (!(opt.alpha >= 0.0 && opt.alpha < 1.0)) {
      throw Error(ErrorCode::kAlphaOutOfRange, "--alpha must lie in [0, 1)");
    }
    return 0;
  });
  fs::path dir = opt.out ? fs::path(*opt.out)
                         : fs::path(opt.results).parent_path();
  if (dir.empty()) dir = ".";
  WriteOutputs(results, dir, opt.z_max, opt.alpha, opt.exclude_flagged,
               opt.plot, false, out);
  return kExitOk;
}

void AddRunOptions(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--config", opt.config, "experiment config (JSON)")
      ->required();
  cmd->add_option("--workers", opt.workers,
                  "worker threads; never changes the results")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opt.out,
                  fmt::format("output directory (default: outputs.dir, then "
                              "${}, then ./ieoe_out)",
                              kOutDirEnv));
  cmd->add_flag("--fail-fast", opt.fail_fast,
                "abort with exit code 4 on the first estimator failure");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Interpretable evaluation of off-policy estimators", "ieoe"};
  app.require_subcommand(1);
  RunOptions synth_opt, cls_opt, rw_opt;
  ReportOptions report_opt;
  auto* synth = app.add_subcommand("synth", "run on a synthetic bandit problem");
  auto* cls = app.add_subcommand(
      "classification", "run on a classification dataset turned into a log");
  auto* rw = app.add_subcommand("realworld",
                                "run on logs collected by several policies");
  auto* report = app.add_subcommand(
      "report", "re-score an existing squared_errors.csv");
  AddRunOptions(synth, synth_opt);
  AddRunOptions(cls, cls_opt);
  AddRunOptions(rw, rw_opt);
  report->add_option("--results", report_opt.results, "squared_errors.csv")
      ->required();
  report->add_option("--z-max", report_opt.z_max,
                     "AU-CDF upper limit (default: 99th percentile)");
  report->add_option("--alpha", report_opt.alpha, "CVaR level")
      ->capture_default_str();
  report->add_option("--out", report_opt.out,
                     "output directory (default: next to --results)");
  report->add_flag("--exclude-flagged", report_opt.exclude_flagged,
                   "leave failed records out of the scores");
  report->add_flag("!--no-plot", report_opt.plot, "skip cdf.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  try {
    if (*synth) return RunMode(ExperimentMode::kSynthetic, synth_opt, out);
    if (*cls) return RunMode(ExperimentMode::kClassification, cls_opt, out);
    if (*rw) return RunMode(ExperimentMode::kRealWorld, rw_opt, out);
    return RunReport(report_opt, out);
  } catch (const StageError& e) {
    fmt::print(err, "ieoe: {}\n", e.message);
    return e.code;
  }
}

}  // namespace ieoe::io
