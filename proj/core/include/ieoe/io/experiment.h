#ifndef IEOE_IO_EXPERIMENT_H_
#define IEOE_IO_EXPERIMENT_H_

#include <vector>

#include "ieoe/evaluator.h"
#include "ieoe/io/config.h"

namespace ieoe::io {

struct Algorithm1Inputs {
  LoggedBanditFeedback data;
  std::vector<EvaluationPolicy> policies;
};

struct Algorithm2Inputs {
  std::vector<RealWorldLog> logs;
  std::vector<std::vector<ActionDistribution>> policy_on_log;
};

// Logged data from the synthetic behavior policy and alpha-mixed policies
// over the true-reward argmax/argmin, valued by Monte Carlo.
Algorithm1Inputs PrepareSynthetic(const SyntheticSource& source);

// Seeded train/test split; classifiers are trained on the train part, the
// behavior policy logs the test part, and each policy's ground truth comes
// from the fully observed test labels.
Algorithm1Inputs PrepareClassification(const ClassificationSource& source);

// Loads every log and evaluates each policy file at every log's contexts.
Algorithm2Inputs PrepareRealWorld(const RealWorldSource& source,
                                  bool require_propensities);

// Estimators named in the config, with "linear" and empty model spaces
// resolved for the data's reward type.
EstimatorList BuildEstimators(const ExperimentConfig& config,
                              bool binary_rewards);

IeoeConfig ToIeoeConfig(const ExperimentConfig& config);

// Whether any configured estimator reads logged propensities.
bool NeedsLoggedPropensities(const ExperimentConfig& config);

ResultSet RunExperiment(const ExperimentConfig& config);

}  // namespace ieoe::io

#endif  // IEOE_IO_EXPERIMENT_H_
