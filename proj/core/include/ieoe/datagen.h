#ifndef IEOE_DATAGEN_H_
#define IEOE_DATAGEN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/rng.h"

namespace ieoe {

enum class RewardKind { kBinary, kContinuous };

// A synthetic bandit problem with known mean reward q(x, a) and a softmax
// behavior policy. Contexts are standard normal d-vectors.
struct SyntheticEnvironment {
  int dim_context = 5;
  int n_actions = 10;
  RewardKind reward_kind = RewardKind::kBinary;
  double r_max = 1.0;
  Matrix reward_params;    // n_actions x (d + 1), last column is the bias
  Matrix behavior_params;  // n_actions x (d + 1)
  std::uint64_t seed = 0;

  // Random parameters drawn from `seed`. `behavior_scale` multiplies the
  // behavior logits (0 gives the uniform behavior policy).
  static SyntheticEnvironment Make(int dim_context, int n_actions,
                                   RewardKind reward_kind, std::uint64_t seed,
                                   double behavior_scale = 1.0);

  // q(x, a): logistic link (times r_max) for binary rewards, linear clipped to
  // [0, r_max] for continuous rewards.
  Matrix MeanRewards(const Matrix& contexts) const;
  ActionDistribution BehaviorDist(const Matrix& contexts) const;
};

void ValidateEnvironment(const SyntheticEnvironment& env);

Matrix SampleContexts(int dim, std::size_t n, Rng& rng);

struct SyntheticSample {
  LoggedBanditFeedback feedback;
  RewardPredictionMatrix true_q;
};

// Continuous rewards add uniform noise on [-0.1, 0.1] r_max and clip.
SyntheticSample GenerateSyntheticFeedback(const SyntheticEnvironment& env,
                                          std::size_t n, std::uint64_t seed);

// A policy that can be evaluated at arbitrary contexts.
using PolicyFn = std::function<ActionDistribution(const Matrix& contexts)>;

struct PolicyValue {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo estimate of E_x[sum_a pi_e(a|x) q(x, a)] over n_mc fresh
// contexts. Exact (std_error 0) when q is the same constant everywhere.
PolicyValue TruePolicyValue(const SyntheticEnvironment& env,
                            const PolicyFn& eval_policy, std::size_t n_mc,
                            std::uint64_t seed);

struct ClassificationDataset {
  Matrix features;
  std::vector<int> labels;
  int n_classes = 0;

  std::size_t size() const { return labels.size(); }
  ClassificationDataset Subset(std::span<const std::size_t> rows) const;
};

void ValidateClassificationDataset(const ClassificationDataset& ds);

// Gaussian class clusters: centroids ~ N(0, class_sep^2 I), features are the
// centroid of a uniformly drawn label plus N(0, I) noise.
ClassificationDataset MakeGaussianClassification(std::size_t n, int n_classes,
                                                 int dim, double class_sep,
                                                 std::uint64_t seed);

// Seeded split; the first element holds round(train_fraction * n) rows.
std::pair<ClassificationDataset, ClassificationDataset> TrainTestSplit(
    const ClassificationDataset& ds, double train_fraction, std::uint64_t seed);

using DeterministicPolicy =
    std::function<int(const Eigen::Ref<const Eigen::RowVectorXd>&)>;

// pi(a|x) = alpha I{pi_det(x) = a} + (1 - alpha) / |A|. A null
// deterministic_choice is allowed only with alpha = 0 (uniform policy).
struct MixedPolicy {
  DeterministicPolicy deterministic_choice;
  double alpha = 0.0;
};

ActionDistribution MixedPolicyDistribution(const MixedPolicy& policy,
                                           const Matrix& contexts,
                                           int n_actions);

enum class ClassifierKind { kLogistic, kBoosting };

struct ClassifierParams {
  double c = 100.0;  // logistic
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_leaf = 5;
  int n_estimators = 100;
};

// Trains a multiclass classifier and returns its argmax decision rule.
DeterministicPolicy TrainClassifier(ClassifierKind kind,
                                    const ClassificationDataset& train,
                                    const ClassifierParams& params = {});

// Runs the behavior policy on the dataset: a_i^b ~ pi_b(.|x_i),
// r_i = I{a_i^b = label_i}, propensity = pi_b(a_i^b|x_i), r_max = 1.
LoggedBanditFeedback ClassificationToFeedback(const ClassificationDataset& ds,
                                              const MixedPolicy& behavior,
                                              std::uint64_t seed);

// mean_i pi_e(label_i | x_i) using the fully observed test labels.
double ClassificationGroundTruth(const ClassificationDataset& ds_test,
                                 const ActionDistribution& eval_dist_at_test);

}  // namespace ieoe

#endif  // IEOE_DATAGEN_H_
