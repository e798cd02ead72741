#ifndef IEOE_ESTIMATORS_H_
#define IEOE_ESTIMATORS_H_

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/model_spec.h"

namespace ieoe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class EstimatorKind { kDm, kIpwPs, kSnipw, kDrPs, kSndr, kSwitchDr, kDrOs };

inline constexpr EstimatorKind kAllEstimatorKinds[] = {
    EstimatorKind::kDm,   EstimatorKind::kIpwPs,    EstimatorKind::kSnipw,
    EstimatorKind::kDrPs, EstimatorKind::kSndr,     EstimatorKind::kSwitchDr,
    EstimatorKind::kDrOs};

std::string_view EstimatorKindName(EstimatorKind kind);
std::optional<EstimatorKind> ParseEstimatorKind(std::string_view name);

// Whether the estimator consumes a reward model q_hat (and hence K).
bool UsesRewardModel(EstimatorKind kind);
// Whether the estimator consumes importance weights.
bool UsesWeights(EstimatorKind kind);

// Which shrinkage knob the estimator exposes, if any.
enum class ShrinkageParam { kNone, kLambda, kTau };
ShrinkageParam ShrinkageParamOf(EstimatorKind kind);

struct EstimatorHyperparams {
  double lambda = kInf;
  double tau = kInf;
  int k_folds = 1;
  ModelSpec reward_model;
};

void ValidateHyperparams(const EstimatorHyperparams& theta);

struct PolicyValueEstimate {
  double value = 0.0;
};

// E_n[ sum_a pi_e(a|x_i) q_hat(x_i, a) ]
PolicyValueEstimate EstimateDm(const ActionDistribution& eval_dist,
                               const RewardPredictionMatrix& q_hat);

PolicyValueEstimate EstimateIpw(const LoggedBanditFeedback& fb,
                                const ImportanceWeights& weights);

// E_n[ min(rho_i, lambda) r_i ]; lambda = kInf is IPW.
PolicyValueEstimate EstimateIpwPs(const LoggedBanditFeedback& fb,
                                  const ImportanceWeights& weights,
                                  double lambda);

// E_n[rho r] / E_n[rho]. Throws kZeroWeightSum when every weight is zero.
PolicyValueEstimate EstimateSnipw(const LoggedBanditFeedback& fb,
                                  const ImportanceWeights& weights);

PolicyValueEstimate EstimateDrPs(const LoggedBanditFeedback& fb,
                                 const ActionDistribution& eval_dist,
                                 const ImportanceWeights& weights,
                                 const RewardPredictionMatrix& q_hat,
                                 double lambda);

// Evaluated as E_n[dm_i] + E_n[rho_i (r_i - q_hat_i)] / E_n[rho], which is
// algebraically the per-sample normalized form and reduces to SNIPW exactly
// when q_hat is identically zero.
PolicyValueEstimate EstimateSndr(const LoggedBanditFeedback& fb,
                                 const ActionDistribution& eval_dist,
                                 const ImportanceWeights& weights,
                                 const RewardPredictionMatrix& q_hat);

// The indicator keeps the DR term when rho_i <= tau.
PolicyValueEstimate EstimateSwitchDr(const LoggedBanditFeedback& fb,
                                     const ActionDistribution& eval_dist,
                                     const ImportanceWeights& weights,
                                     const RewardPredictionMatrix& q_hat,
                                     double tau);

// Optimistic shrinkage rho_hat = lambda rho / (rho^2 + lambda).
PolicyValueEstimate EstimateDrOs(const LoggedBanditFeedback& fb,
                                 const ActionDistribution& eval_dist,
                                 const ImportanceWeights& weights,
                                 const RewardPredictionMatrix& q_hat,
                                 double lambda);

// The modified weight rho_hat(x_i, a_i; theta) used by `kind`.
std::vector<double> ShrunkWeights(std::span<const double> weights,
                                  EstimatorKind kind,
                                  const EstimatorHyperparams& theta);

// Per-sample contributions dm_i + rho_hat_i (r_i - q_hat(x_i, a_i)); their
// mean is the DR-family estimate for the given shrunk weights.
std::vector<double> DoublyRobustTerms(const LoggedBanditFeedback& fb,
                                      const ActionDistribution& eval_dist,
                                      std::span<const double> shrunk,
                                      const RewardPredictionMatrix& q_hat);

// Dispatches to the estimator for `kind`. `q_hat` may be null for kinds that
// do not use a reward model.
PolicyValueEstimate Estimate(EstimatorKind kind, const LoggedBanditFeedback& fb,
                             const ActionDistribution& eval_dist,
                             const ImportanceWeights& weights,
                             const RewardPredictionMatrix* q_hat,
                             const EstimatorHyperparams& theta);

// Reward predictions for the rows of one fold, fit without those rows.
struct FoldPrediction {
  std::vector<std::size_t> rows;
  RewardPredictionMatrix q_hat;  // rows align with `rows`
};

// K^{-1} sum_k V_hat(pi_e; D_k, q_hat_k). Self-normalized variants normalize
// within each fold. Folds must be disjoint, equal-sized and cover all but at
// most K-1 rows (the remainder dropped when n is not divisible by K).
PolicyValueEstimate CrossFitEstimate(const LoggedBanditFeedback& fb,
                                     const ActionDistribution& eval_dist,
                                     const ImportanceWeights& weights,
                                     EstimatorKind kind,
                                     const EstimatorHyperparams& theta,
                                     std::span<const FoldPrediction> folds);

}  // namespace ieoe

#endif  // IEOE_ESTIMATORS_H_
