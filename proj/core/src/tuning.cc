#include "ieoe/tuning.h"

#include <cmath>
#include <string>

#include "ieoe/error.h"

namespace ieoe {
namespace {

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kDeltaOutOfRange,
                "delta " + std::to_string(delta) + " outside (0, 1]");
  }
}

EstimatorHyperparams WithShrinkage(EstimatorKind kind, double value) {
  EstimatorHyperparams theta;
  if (ShrinkageParamOf(kind) == ShrinkageParam::kTau) {
    theta.tau = value;
  } else {
    theta.lambda = value;
  }
  return theta;
}

}  // namespace

std::vector<double> DefaultShrinkageGrid() {
  return {1, 5, 10, 50, 100, 500, 1e3, 5e3, 1e4, 5e4, 1e5, kInf};
}

void ValidateTuningConfig(const TuningConfig& config) {
  CheckDelta(config.delta);
  if (config.candidate_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate grid is empty");
  }
  for (double v : config.candidate_grid) {
    if (!(v >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid values must be >= 0 (inf allowed)");
    }
  }
}

double DirectBiasUpperBound(const ImportanceWeights& weights,
                            std::span<const double> shrunk,
                            const LoggedBanditFeedback& fb,
                            const RewardPredictionMatrix& q_hat, double delta) {
  CheckDelta(delta);
  const std::size_t n = fb.size();
  if (n == 0 || weights.size() != n || shrunk.size() != n ||
      q_hat.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "bias bound inputs must all have length n");
  }
  double bias_sum = 0.0;
  double second_moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = weights.weights[i];
    const double resid =
        fb.rewards[i] - q_hat.values(static_cast<Eigen::Index>(i), fb.actions[i]);
    bias_sum += (shrunk[i] - rho) * resid;
    second_moment += rho * rho;
  }
  const double nd = static_cast<double>(n);
  second_moment /= nd;
  const double log_term = std::log(2.0 / delta);
  return std::abs(bias_sum / nd) + std::sqrt(2.0 * second_moment * log_term / nd) +
         2.0 * weights.rho_max * log_term / (3.0 * nd);
}

double SampleVariance(std::span<const double> terms) {
  const std::size_t n = terms.size();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "sample variance needs at least two terms");
  }
  double mean = 0.0;
  for (double t : terms) mean += t;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double t : terms) ss += (t - mean) * (t - mean);
  const double s2 = ss / static_cast<double>(n - 1);
  return s2 / static_cast<double>(n);
}

std::vector<CandidateScore> ScoreCandidates(
    EstimatorKind kind, std::span<const double> candidate_grid,
    const LoggedBanditFeedback& fb, const ActionDistribution& eval_dist,
    const ImportanceWeights& weights, const RewardPredictionMatrix& q_hat,
    double delta) {
  std::vector<CandidateScore> scores;
  scores.reserve(candidate_grid.size());
  for (double value : candidate_grid) {
    const auto shrunk =
        ShrunkWeights(weights.weights, kind, WithShrinkage(kind, value));
    CandidateScore s;
    s.candidate = value;
    s.bias_ub = DirectBiasUpperBound(weights, shrunk, fb, q_hat, delta);
    s.variance = SampleVariance(DoublyRobustTerms(fb, eval_dist, shrunk, q_hat));
    scores.push_back(s);
  }
  return scores;
}

double SelectHyperparameter(EstimatorKind kind,
                            std::span<const double> candidate_grid,
                            const LoggedBanditFeedback& fb,
                            const ActionDistribution& eval_dist,
                            const ImportanceWeights& weights,
                            const RewardPredictionMatrix& q_hat, double delta) {
  if (candidate_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate grid is empty");
  }
  const auto scores =
      ScoreCandidates(kind, candidate_grid, fb, eval_dist, weights, q_hat, delta);
  const CandidateScore* best = &scores.front();
  for (const CandidateScore& s : scores) {
    const bool better = s.score() < best->score();
    const bool tie_smaller =
        s.score() == best->score() && s.candidate < best->candidate;
    if (better || tie_smaller) best = &s;
  }
  return best->candidate;
}

}  // namespace ieoe
