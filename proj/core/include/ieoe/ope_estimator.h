#ifndef IEOE_OPE_ESTIMATOR_H_
#define IEOE_OPE_ESTIMATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/estimators.h"
#include "ieoe/model_spec.h"
#include "ieoe/reward_models.h"

namespace ieoe {

// Everything an estimator sees for one seed of the protocol.
struct Trial {
  std::uint64_t seed = 0;
  std::size_t policy_index = 0;
  const LoggedBanditFeedback* data = nullptr;     // bootstrap sample
  const ActionDistribution* eval_dist = nullptr;  // pi_e at the sample's rows
  double ground_truth = 0.0;
};

struct TrialEstimate {
  double value = 0.0;
  std::string theta_digest;
};

class OffPolicyEstimator {
 public:
  virtual ~OffPolicyEstimator() = default;
  virtual const std::string& name() const = 0;
  // Throws ieoe::Error when the estimate cannot be formed.
  virtual TrialEstimate Estimate(const Trial& trial) const = 0;
};

// Returns the ground truth; a control that must score zero error.
class GroundTruthOracle final : public OffPolicyEstimator {
 public:
  explicit GroundTruthOracle(std::string name = "oracle")
      : name_(std::move(name)) {}
  const std::string& name() const override { return name_; }
  TrialEstimate Estimate(const Trial& trial) const override {
    return {trial.ground_truth, "oracle"};
  }

 private:
  std::string name_;
};

// phi: how each seed's theta is drawn from Theta.
enum class SamplerMode {
  // Every component uniformly from Theta.
  kUniformRandom,
  // Model family and K uniformly, model hyperparameters by random search and
  // lambda/tau by minimizing BiasUB^2 + V_n on the bootstrap sample.
  kTunedEstimatorParams,
};

enum class PropensityMode { kTrue, kEstimated };

struct ModelChoice {
  ModelFamily family = ModelFamily::kRidge;
  HyperparamSpace space;
};

// Theta, minus the per-estimator lambda/tau grid.
struct HyperparamSpaceConfig {
  std::vector<ModelChoice> reward_models;
  std::vector<int> k_folds = {1, 2, 3, 4, 5};
  std::vector<ModelChoice> behavior_models;
  int random_search_iter = 5;
  double delta = 0.05;
  std::optional<TemperatureScaling> calibration = TemperatureScaling{};
};

// Reward-model families for the default grid: logistic (binary rewards) or
// ridge (continuous) plus boosting, each with its default ranges.
std::vector<ModelChoice> DefaultRewardModels(bool binary_rewards);
std::vector<ModelChoice> DefaultBehaviorModels();

struct EstimatorSettings {
  std::string name;
  EstimatorKind kind = EstimatorKind::kDm;
  std::vector<double> grid;  // lambda or tau candidates; unused otherwise
  SamplerMode sampler = SamplerMode::kTunedEstimatorParams;
  PropensityMode propensity = PropensityMode::kTrue;
  HyperparamSpaceConfig space;
};

void ValidateEstimatorSettings(const EstimatorSettings& settings);

// One of the built-in estimators with its hyperparameters drawn per seed.
// Draws come from streams keyed by (seed, estimator name) so estimators are
// independent of each other and of the order they run in.
class ConfiguredEstimator final : public OffPolicyEstimator {
 public:
  explicit ConfiguredEstimator(EstimatorSettings settings);
  const std::string& name() const override { return settings_.name; }
  TrialEstimate Estimate(const Trial& trial) const override;

 private:
  EstimatorSettings settings_;
};

}  // namespace ieoe

#endif  // IEOE_OPE_ESTIMATOR_H_
