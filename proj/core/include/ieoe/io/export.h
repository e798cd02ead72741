#ifndef IEOE_IO_EXPORT_H_
#define IEOE_IO_EXPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "ieoe/evaluator.h"

namespace ieoe::io {

// score / best across estimators, where best is the largest AU-CDF and the
// smallest mean, CVaR and Std. A score equal to the best normalizes to 1.
struct NormalizedScores {
  double mean = 1.0;
  double au_cdf = 1.0;
  double cvar = 1.0;
  double std = 1.0;
};

std::vector<NormalizedScores> NormalizeScores(
    const std::vector<EstimatorSummary>& summaries);

// summary.csv: estimator,mean,au_cdf,cvar,std,mean_norm,au_cdf_norm,
// cvar_norm,std_norm,n,flagged,z_max,cvar_alpha
std::string FormatSummaryCsv(const ResultSet& results,
                             const std::vector<EstimatorSummary>& summaries,
                             double z_max, double cvar_alpha);

// Writes squared_errors.csv and summary.csv into `dir`, creating it.
void ExportResults(const ResultSet& results,
                   const std::vector<EstimatorSummary>& summaries,
                   double z_max, double cvar_alpha,
                   const std::filesystem::path& dir);

}  // namespace ieoe::io

#endif  // IEOE_IO_EXPORT_H_
