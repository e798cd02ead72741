#ifndef IEOE_REWARD_MODELS_H_
#define IEOE_REWARD_MODELS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/estimators.h"
#include "ieoe/model_spec.h"

namespace ieoe {

// q_hat as a function of (context, action). Rewards are modeled on the
// features [x, one_hot(a)]. Immutable and cheap to copy.
class FittedRewardModel {
 public:
  class Impl;

  FittedRewardModel() = default;
  explicit FittedRewardModel(std::shared_ptr<const Impl> impl);

  double Predict(const Eigen::Ref<const Eigen::RowVectorXd>& context,
                 int action) const;
  int dim() const;
  int n_actions() const;
  std::vector<double> Parameters() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

// Whether every reward is 0 or 1 (binary-outcome data).
bool HasBinaryRewards(const LoggedBanditFeedback& fb);

// Fits q_hat on the given rows. Logistic models fit rewards scaled by r_max;
// boosting uses logistic loss on binary rewards and squared loss otherwise.
FittedRewardModel FitRewardModel(const ModelSpec& spec,
                                 const LoggedBanditFeedback& fb,
                                 std::span<const std::size_t> rows);

RewardPredictionMatrix PredictRewardMatrix(const FittedRewardModel& model,
                                           const LoggedBanditFeedback& fb,
                                           std::span<const std::size_t> rows);

// K equal folds from a seeded shuffle (K = 1: all rows in order). Each fold's
// predictions come from a model fit on every row outside that fold. When n is
// not a multiple of K the trailing n mod K shuffled rows belong to no fold.
std::vector<FoldPrediction> CrossFitRewardMatrices(
    const ModelSpec& spec, const LoggedBanditFeedback& fb, int k,
    std::uint64_t seed);

// pi_hat_b(. | x). Immutable and cheap to copy.
class FittedPolicyModel {
 public:
  class Impl;

  FittedPolicyModel() = default;
  explicit FittedPolicyModel(std::shared_ptr<const Impl> impl);

  Eigen::VectorXd PredictRow(
      const Eigen::Ref<const Eigen::RowVectorXd>& context) const;
  ActionDistribution PredictDist(const Matrix& contexts) const;
  double temperature() const;
  int n_actions() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

struct NoCalibration {};
struct TemperatureScaling {
  double holdout_fraction = 0.5;
};
using Calibration = std::variant<NoCalibration, TemperatureScaling>;

inline constexpr double kSingleClassEpsilon = 1e-6;

// Classifier over actions given context: softmax for kLogistic, one-vs-rest
// boosted trees for kBoosting. With TemperatureScaling the model is fit on
// the non-holdout rows and one temperature minimizing holdout NLL rescales
// its log-probabilities. When only one action was logged a degenerate model
// (mass 1 - eps on it) is returned with a warning.
FittedPolicyModel FitBehaviorPolicy(const ModelSpec& spec,
                                    const LoggedBanditFeedback& fb,
                                    const Calibration& calibration,
                                    std::uint64_t seed);

// Raises every probability to at least `floor` and renormalizes the rows.
// Returns the number of entries that were raised.
std::size_t FloorPropensities(Matrix& probs, double floor);

inline constexpr double kPropensityFloor = 1e-7;

enum class SearchTarget { kRewardModel, kBehaviorPolicy };

// Samples n_iter specs from `space`, scores each by 2-fold cross-validated
// loss (squared loss for regression, log loss for classification) and returns
// the best. Ties keep the earliest sample.
ModelSpec RandomSearch(const HyperparamSpace& space, ModelFamily family,
                       const LoggedBanditFeedback& fb, int n_iter,
                       std::uint64_t seed,
                       SearchTarget target = SearchTarget::kRewardModel);

}  // namespace ieoe

#endif  // IEOE_REWARD_MODELS_H_
