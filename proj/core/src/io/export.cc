#include "ieoe/io/export.h"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "ieoe/error.h"
#include "ieoe/io/csv.h"

namespace ieoe::io {
namespace {

double Ratio(double score, double best) {
  if (score == best) return 1.0;
  if (best == 0.0) return std::numeric_limits<double>::infinity();
  return score / best;
}

}  // namespace

std::vector<NormalizedScores> NormalizeScores(
    const std::vector<EstimatorSummary>& summaries) {
  std::vector<NormalizedScores> out(summaries.size());
  if (summaries.empty()) return out;
  constexpr double kInfinity = std::numeric_limits<double>::infinity();
  double best_mean = kInfinity, best_cvar = kInfinity, best_std = kInfinity;
  double best_au = -kInfinity;
  for (const auto& s : summaries) {
    best_mean = std::min(best_mean, s.scores.mean);
    best_cvar = std::min(best_cvar, s.scores.cvar);
    best_std = std::min(best_std, s.scores.std);
    best_au = std::max(best_au, s.scores.au_cdf);
  }
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i].scores;
    out[i].mean = Ratio(s.mean, best_mean);
    out[i].au_cdf = Ratio(s.au_cdf, best_au);
    out[i].cvar = Ratio(s.cvar, best_cvar);
    out[i].std = Ratio(s.std, best_std);
  }
  return out;
}

std::string FormatSummaryCsv(const ResultSet& results,
                             const std::vector<EstimatorSummary>& summaries,
                             double z_max, double cvar_alpha) {
  std::string out =
      "estimator,mean,au_cdf,cvar,std,mean_norm,au_cdf_norm,cvar_norm,"
      "std_norm,n,flagged,z_max,cvar_alpha\n";
  const auto norm = NormalizeScores(summaries);
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i];
    std::size_t n = results.SquaredErrors(s.estimator).size();
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                       EscapeCsvField(s.estimator), s.scores.mean,
                       s.scores.au_cdf, s.scores.cvar, s.scores.std,
                       norm[i].mean, norm[i].au_cdf, norm[i].cvar,
                       norm[i].std, n, s.flagged, z_max, cvar_alpha);
  }
  return out;
}

void ExportResults(const ResultSet& results,
                   const std::vector<EstimatorSummary>& summaries,
                   double z_max, double cvar_alpha,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot create '{}': {}", dir.string(),
                            ec.message()));
  }
  WriteTextFile(dir / "squared_errors.csv", FormatSquaredErrorsCsv(results));
  WriteTextFile(dir / "summary.csv",
                FormatSummaryCsv(results, summaries, z_max, cvar_alpha));
}

}  // namespace ieoe::io
