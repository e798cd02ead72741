#ifndef IEOE_TUNING_H_
#define IEOE_TUNING_H_

#include <span>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/estimators.h"

namespace ieoe {

inline constexpr double kDefaultDelta = 0.05;

// {1, 5, 10, 50, ..., 1e5, inf}
std::vector<double> DefaultShrinkageGrid();

struct TuningConfig {
  double delta = kDefaultDelta;
  std::vector<double> candidate_grid = DefaultShrinkageGrid();
};

void ValidateTuningConfig(const TuningConfig& config);

// Direct bias estimation bound:
//   |E_n[(rho_hat - rho)(r - q_hat(x, a))]|
//     + sqrt(2 E_n[rho^2] log(2/delta) / n) + 2 rho_max log(2/delta) / (3n)
// with the second moment and rho_max taken over the logged pairs.
double DirectBiasUpperBound(const ImportanceWeights& weights,
                            std::span<const double> shrunk,
                            const LoggedBanditFeedback& fb,
                            const RewardPredictionMatrix& q_hat, double delta);

// S^2 / n with S^2 the unbiased sample variance of the per-sample terms.
double SampleVariance(std::span<const double> per_sample_terms);

struct CandidateScore {
  double candidate = 0.0;
  double bias_ub = 0.0;
  double variance = 0.0;
  double score() const { return bias_ub * bias_ub + variance; }
};

// Scores every candidate lambda/tau for `kind` by BiasUB^2 + V_n.
std::vector<CandidateScore> ScoreCandidates(
    EstimatorKind kind, std::span<const double> candidate_grid,
    const LoggedBanditFeedback& fb, const ActionDistribution& eval_dist,
    const ImportanceWeights& weights, const RewardPredictionMatrix& q_hat,
    double delta);

// argmin of BiasUB^2 + V_n over the grid; ties go to the smallest candidate.
// For estimators without a reward model pass an all-zero q_hat.
double SelectHyperparameter(EstimatorKind kind,
                            std::span<const double> candidate_grid,
                            const LoggedBanditFeedback& fb,
                            const ActionDistribution& eval_dist,
                            const ImportanceWeights& weights,
                            const RewardPredictionMatrix& q_hat, double delta);

}  // namespace ieoe

#endif  // IEOE_TUNING_H_
