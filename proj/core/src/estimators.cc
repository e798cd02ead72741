#include "ieoe/estimators.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ieoe/error.h"

namespace ieoe {
namespace {

void CheckFeedbackWeights(const LoggedBanditFeedback& fb,
                          const ImportanceWeights& weights) {
  if (weights.size() != fb.size() || fb.size() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights length " + std::to_string(weights.size()) +
                    " does not match feedback size " +
                    std::to_string(fb.size()));
  }
}

void CheckModelInputs(const LoggedBanditFeedback& fb,
                      const ActionDistribution& eval_dist,
                      const RewardPredictionMatrix& q_hat) {
  const std::size_t n = fb.size();
  if (eval_dist.rows() != n || eval_dist.n_actions() != fb.n_actions) {
    throw Error(ErrorCode::kDimensionMismatch,
                "evaluation distribution shape does not match feedback");
  }
  if (q_hat.rows() != n || q_hat.values.cols() != fb.n_actions) {
    throw Error(ErrorCode::kDimensionMismatch,
                "reward prediction matrix shape does not match feedback");
  }
}

PolicyValueEstimate Finite(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, "estimate is not finite");
  }
  return {v};
}

double DmTerm(const ActionDistribution& eval_dist,
              const RewardPredictionMatrix& q_hat, std::size_t i) {
  const auto row = static_cast<Eigen::Index>(i);
  double s = 0.0;
  for (Eigen::Index a = 0; a < q_hat.values.cols(); ++a) {
    s += eval_dist.probs()(row, a) * q_hat.values(row, a);
  }
  return s;
}

double Residual(const LoggedBanditFeedback& fb,
                const RewardPredictionMatrix& q_hat, std::size_t i) {
  return fb.rewards[i] -
         q_hat.values(static_cast<Eigen::Index>(i), fb.actions[i]);
}

double MeanDr(const LoggedBanditFeedback& fb,
              const ActionDistribution& eval_dist,
              std::span<const double> shrunk,
              const RewardPredictionMatrix& q_hat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    sum += DmTerm(eval_dist, q_hat, i) + shrunk[i] * Residual(fb, q_hat, i);
  }
  return sum / static_cast<double>(fb.size());
}

double WeightMean(const ImportanceWeights& weights) {
  double sum = 0.0;
  for (double w : weights.weights) sum += w;
  const double mean = sum / static_cast<double>(weights.size());
  if (!(mean > 0.0)) {
    throw Error(ErrorCode::kZeroWeightSum, "importance weights sum to zero");
  }
  return mean;
}

double OptimisticShrink(double rho, double lambda) {
  if (lambda == 0.0 || rho == 0.0) return 0.0;
  if (std::isinf(lambda)) return rho;
  return lambda * rho / (rho * rho + lambda);
}

}  // namespace

std::string_view EstimatorKindName(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kDm: return "dm";
    case EstimatorKind::kIpwPs: return "ipw_ps";
    case EstimatorKind::kSnipw: return "snipw";
    case EstimatorKind::kDrPs: return "dr_ps";
    case EstimatorKind::kSndr: return "sndr";
    case EstimatorKind::kSwitchDr: return "switch_dr";
    case EstimatorKind::kDrOs: return "dr_os";
  }
  throw Error(ErrorCode::kUnknownEstimatorKind, "unknown estimator kind");
}

std::optional<EstimatorKind> ParseEstimatorKind(std::string_view name) {
  for (EstimatorKind k : kAllEstimatorKinds) {
    if (EstimatorKindName(k) == name) return k;
  }
  return std::nullopt;
}

bool UsesRewardModel(EstimatorKind kind) {
  return kind != EstimatorKind::kIpwPs && kind != EstimatorKind::kSnipw;
}

bool UsesWeights(EstimatorKind kind) { return kind != EstimatorKind::kDm; }

ShrinkageParam ShrinkageParamOf(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kIpwPs:
    case EstimatorKind::kDrPs:
    case EstimatorKind::kDrOs:
      return ShrinkageParam::kLambda;
    case EstimatorKind::kSwitchDr:
      return ShrinkageParam::kTau;
    default:
      return ShrinkageParam::kNone;
  }
}

void ValidateHyperparams(const EstimatorHyperparams& theta) {
  if (!(theta.lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  }
  if (!(theta.tau >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be >= 0");
  }
  if (theta.k_folds < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k_folds must be >= 1");
  }
}

PolicyValueEstimate EstimateDm(const ActionDistribution& eval_dist,
                               const RewardPredictionMatrix& q_hat) {
  const std::size_t n = eval_dist.rows();
  if (n == 0 || q_hat.rows() != n ||
      q_hat.values.cols() != eval_dist.n_actions()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "reward prediction matrix shape does not match distribution");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += DmTerm(eval_dist, q_hat, i);
  return Finite(sum / static_cast<double>(n));
}

PolicyValueEstimate EstimateIpw(const LoggedBanditFeedback& fb,
                                const ImportanceWeights& weights) {
  CheckFeedbackWeights(fb, weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    sum += weights.weights[i] * fb.rewards[i];
  }
  return Finite(sum / static_cast<double>(fb.size()));
}

PolicyValueEstimate EstimateIpwPs(const LoggedBanditFeedback& fb,
                                  const ImportanceWeights& weights,
                                  double lambda) {
  CheckFeedbackWeights(fb, weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    sum += std::min(weights.weights[i], lambda) * fb.rewards[i];
  }
  return Finite(sum / static_cast<double>(fb.size()));
}

PolicyValueEstimate EstimateSnipw(const LoggedBanditFeedback& fb,
                                  const ImportanceWeights& weights) {
  CheckFeedbackWeights(fb, weights);
  const double w_mean = WeightMean(weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    sum += weights.weights[i] * fb.rewards[i];
  }
  return Finite((sum / static_cast<double>(fb.size())) / w_mean);
}

PolicyValueEstimate EstimateDrPs(const LoggedBanditFeedback& fb,
                                 const ActionDistribution& eval_dist,
                                 const ImportanceWeights& weights,
                                 const RewardPredictionMatrix& q_hat,
                                 double lambda) {
  CheckFeedbackWeights(fb, weights);
  CheckModelInputs(fb, eval_dist, q_hat);
  EstimatorHyperparams theta;
  theta.lambda = lambda;
  const auto shrunk =
      ShrunkWeights(weights.weights, EstimatorKind::kDrPs, theta);
  return Finite(MeanDr(fb, eval_dist, shrunk, q_hat));
}

PolicyValueEstimate EstimateSndr(const LoggedBanditFeedback& fb,
                                 const ActionDistribution& eval_dist,
                                 const ImportanceWeights& weights,
                                 const RewardPredictionMatrix& q_hat) {
  CheckFeedbackWeights(fb, weights);
  CheckModelInputs(fb, eval_dist, q_hat);
  const double w_mean = WeightMean(weights);
  const double n = static_cast<double>(fb.size());
  double dm_sum = 0.0;
  double corr_sum = 0.0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    dm_sum += DmTerm(eval_dist, q_hat, i);
    corr_sum += weights.weights[i] * Residual(fb, q_hat, i);
  }
  return Finite(dm_sum / n + (corr_sum / n) / w_mean);
}

PolicyValueEstimate EstimateSwitchDr(const LoggedBanditFeedback& fb,
                                     const ActionDistribution& eval_dist,
                                     const ImportanceWeights& weights,
                                     const RewardPredictionMatrix& q_hat,
                                     double tau) {
  CheckFeedbackWeights(fb, weights);
  CheckModelInputs(fb, eval_dist, q_hat);
  EstimatorHyperparams theta;
  theta.tau = tau;
  const auto shrunk =
      ShrunkWeights(weights.weights, EstimatorKind::kSwitchDr, theta);
  return Finite(MeanDr(fb, eval_dist, shrunk, q_hat));
}

PolicyValueEstimate EstimateDrOs(const LoggedBanditFeedback& fb,
                                 const ActionDistribution& eval_dist,
                                 const ImportanceWeights& weights,
                                 const RewardPredictionMatrix& q_hat,
                                 double lambda) {
  CheckFeedbackWeights(fb, weights);
  CheckModelInputs(fb, eval_dist, q_hat);
  EstimatorHyperparams theta;
  theta.lambda = lambda;
  const auto shrunk =
      ShrunkWeights(weights.weights, EstimatorKind::kDrOs, theta);
  return Finite(MeanDr(fb, eval_dist, shrunk, q_hat));
}

std::vector<double> ShrunkWeights(std::span<const double> weights,
                                  EstimatorKind kind,
                                  const EstimatorHyperparams& theta) {
  std::vector<double> out(weights.begin(), weights.end());
  switch (kind) {
    case EstimatorKind::kIpwPs:
    case EstimatorKind::kDrPs:
      for (double& w : out) w = std::min(w, theta.lambda);
      return out;
    case EstimatorKind::kSwitchDr:
      for (double& w : out) w = w <= theta.tau ? w : 0.0;
      return out;
    case EstimatorKind::kDrOs:
      for (double& w : out) w = OptimisticShrink(w, theta.lambda);
      return out;
    case EstimatorKind::kSnipw:
    case EstimatorKind::kSndr:
      return out;
    case EstimatorKind::kDm:
      std::fill(out.begin(), out.end(), 0.0);
      return out;
  }
  throw Error(ErrorCode::kUnknownEstimatorKind, "unknown estimator kind");
}

std::vector<double> DoublyRobustTerms(const LoggedBanditFeedback& fb,
                                      const ActionDistribution& eval_dist,
                                      std::span<const double> shrunk,
                                      const RewardPredictionMatrix& q_hat) {
  CheckModelInputs(fb, eval_dist, q_hat);
  if (shrunk.size() != fb.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "shrunk weights length does not match feedback");
  }
  std::vector<double> terms(fb.size());
  for (std::size_t i = 0; i < fb.size(); ++i) {
    terms[i] = DmTerm(eval_dist, q_hat, i) + shrunk[i] * Residual(fb, q_hat, i);
  }
  return terms;
}

PolicyValueEstimate Estimate(EstimatorKind kind, const LoggedBanditFeedback& fb,
                             const ActionDistribution& eval_dist,
                             const ImportanceWeights& weights,
                             const RewardPredictionMatrix* q_hat,
                             const EstimatorHyperparams& theta) {
  if (UsesRewardModel(kind) && q_hat == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(EstimatorKindName(kind)) +
                    " requires reward predictions");
  }
  switch (kind) {
    case EstimatorKind::kDm:
      return EstimateDm(eval_dist, *q_hat);
    case EstimatorKind::kIpwPs:
      return EstimateIpwPs(fb, weights, theta.lambda);
    case EstimatorKind::kSnipw:
      return EstimateSnipw(fb, weights);
    case EstimatorKind::kDrPs:
      return EstimateDrPs(fb, eval_dist, weights, *q_hat, theta.lambda);
    case EstimatorKind::kSndr:
      return EstimateSndr(fb, eval_dist, weights, *q_hat);
    case EstimatorKind::kSwitchDr:
      return EstimateSwitchDr(fb, eval_dist, weights, *q_hat, theta.tau);
    case EstimatorKind::kDrOs:
      return EstimateDrOs(fb, eval_dist, weights, *q_hat, theta.lambda);
  }
  throw Error(ErrorCode::kUnknownEstimatorKind, "unknown estimator kind");
}

PolicyValueEstimate CrossFitEstimate(const LoggedBanditFeedback& fb,
                                     const ActionDistribution& eval_dist,
                                     const ImportanceWeights& weights,
                                     EstimatorKind kind,
                                     const EstimatorHyperparams& theta,
                                     std::span<const FoldPrediction> folds) {
  const std::size_t n = fb.size();
  const std::size_t k = folds.size();
  if (k == 0) throw Error(ErrorCode::kNotAPartition, "no folds given");
  const std::size_t fold_size = folds[0].rows.size();
  if (fold_size == 0) throw Error(ErrorCode::kNotAPartition, "empty fold");
  std::vector<char> seen(n, 0);
  for (std::size_t f = 0; f < k; ++f) {
    if (folds[f].rows.size() != fold_size) {
      throw Error(ErrorCode::kNotAPartition, "folds differ in size", f);
    }
    if (folds[f].q_hat.rows() != fold_size) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "fold reward matrix does not match fold size", f);
    }
    for (std::size_t r : folds[f].rows) {
      if (r >= n || seen[r]) {
        throw Error(ErrorCode::kNotAPartition,
                    "row " + std::to_string(r) +
                        " out of range or in more than one fold",
                    r);
      }
      seen[r] = 1;
    }
  }
  if (n - k * fold_size >= k) {
    throw Error(ErrorCode::kNotAPartition,
                "folds leave " + std::to_string(n - k * fold_size) +
                    " rows uncovered");
  }
  double sum = 0.0;
  for (const FoldPrediction& fold : folds) {
    const LoggedBanditFeedback fb_k = fb.Subset(fold.rows);
    const ActionDistribution dist_k = eval_dist.Subset(fold.rows);
    // DM carries no weights.
    const ImportanceWeights w_k =
        weights.weights.empty() ? weights : weights.Subset(fold.rows);
    sum += Estimate(kind, fb_k, dist_k, w_k, &fold.q_hat, theta).value;
  }
  return Finite(sum / static_cast<double>(k));
}

}  // namespace ieoe
