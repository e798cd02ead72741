#include "ieoe/datagen.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <string>

#include "ieoe/boosting.h"
#include "ieoe/error.h"
#include "ieoe/linear_models.h"

namespace ieoe {

using Eigen::Index;

namespace {

Matrix Augmented(const Matrix& contexts) {
  Matrix xa(contexts.rows(), contexts.cols() + 1);
  xa.leftCols(contexts.cols()) = contexts;
  xa.col(contexts.cols()).setOnes();
  return xa;
}

Matrix RandomNormal(Index rows, Index cols, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * normal(rng);
  }
  return m;
}

// Inverse-CDF draw from one probability row.
int SampleAction(const Eigen::Ref<const Eigen::RowVectorXd>& probs, Rng& rng) {
  const double u = Uniform01(rng);
  double acc = 0.0;
  const Index last = probs.size() - 1;
  for (Index a = 0; a < last; ++a) {
    acc += probs(a);
    if (u < acc) return static_cast<int>(a);
  }
  return static_cast<int>(last);
}

std::vector<std::size_t> Permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[UniformIndex(rng, i)]);
  }
  return perm;
}

}  // namespace

SyntheticEnvironment SyntheticEnvironment::Make(int dim_context, int n_actions,
                                                RewardKind reward_kind,
                                                std::uint64_t seed,
                                                double behavior_scale) {
  SyntheticEnvironment env;
  env.dim_context = dim_context;
  env.n_actions = n_actions;
  env.reward_kind = reward_kind;
  env.seed = seed;
  ValidateEnvironment(env);
  Rng rng = MakeRng(seed, Stream::kData);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim_context));
  env.reward_params = RandomNormal(n_actions, dim_context + 1, scale, rng);
  if (reward_kind == RewardKind::kContinuous) {
    // Centre the linear reward inside [0, r_max].
    env.reward_params *= 0.25 * env.r_max;
    env.reward_params.col(dim_context).array() += 0.5 * env.r_max;
  }
  env.behavior_params =
      RandomNormal(n_actions, dim_context + 1, scale * behavior_scale, rng);
  return env;
}

void ValidateEnvironment(const SyntheticEnvironment& env) {
  if (env.dim_context < 1 || env.n_actions < 1 || !(env.r_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "environment needs d >= 1, |A| >= 1, r_max > 0");
  }
  const Index cols = env.dim_context + 1;
  if (env.reward_params.size() != 0 &&
      (env.reward_params.rows() != env.n_actions ||
       env.reward_params.cols() != cols)) {
    throw Error(ErrorCode::kDimensionMismatch, "reward_params shape");
  }
  if (env.behavior_params.size() != 0 &&
      (env.behavior_params.rows() != env.n_actions ||
       env.behavior_params.cols() != cols)) {
    throw Error(ErrorCode::kDimensionMismatch, "behavior_params shape");
  }
}

Matrix SyntheticEnvironment::MeanRewards(const Matrix& contexts) const {
  Matrix q = Augmented(contexts) * reward_params.transpose();
  if (reward_kind == RewardKind::kBinary) {
    return q.unaryExpr([this](double z) { return r_max * Sigmoid(z); });
  }
  return q.cwiseMax(0.0).cwiseMin(r_max);
}

ActionDistribution SyntheticEnvironment::BehaviorDist(
    const Matrix& contexts) const {
  Matrix z = Augmented(contexts) * behavior_params.transpose();
  for (Index i = 0; i < z.rows(); ++i) {
    const double zmax = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - zmax).exp();
    z.row(i) /= z.row(i).sum();
  }
  return ActionDistribution(std::move(z));
}

Matrix SampleContexts(int dim, std::size_t n, Rng& rng) {
  return RandomNormal(static_cast<Index>(n), dim, 1.0, rng);
}

SyntheticSample GenerateSyntheticFeedback(const SyntheticEnvironment& env,
                                          std::size_t n, std::uint64_t seed) {
  ValidateEnvironment(env);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  Rng rng = MakeRng(seed, Stream::kData);
  SyntheticSample out;
  LoggedBanditFeedback& fb = out.feedback;
  fb.contexts = SampleContexts(env.dim_context, n, rng);
  fb.n_actions = env.n_actions;
  fb.r_max = env.r_max;
  out.true_q.values = env.MeanRewards(fb.contexts);
  const ActionDistribution behavior = env.BehaviorDist(fb.contexts);
  fb.actions.resize(n);
  fb.rewards.resize(n);
  fb.propensities.emplace(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Index>(i);
    const int a = SampleAction(behavior.probs().row(row), rng);
    fb.actions[i] = a;
    (*fb.propensities)[i] = behavior(i, a);
    const double q = out.true_q.values(row, a);
    if (env.reward_kind == RewardKind::kBinary) {
      fb.rewards[i] = Uniform01(rng) < q / env.r_max ? env.r_max : 0.0;
    } else {
      const double noise = (2.0 * Uniform01(rng) - 1.0) * 0.1 * env.r_max;
      fb.rewards[i] = std::clamp(q + noise, 0.0, env.r_max);
    }
  }
  return out;
}

PolicyValue TruePolicyValue(const SyntheticEnvironment& env,
                            const PolicyFn& eval_policy, std::size_t n_mc,
                            std::uint64_t seed) {
  ValidateEnvironment(env);
  if (n_mc == 0) throw Error(ErrorCode::kInvalidArgument, "n_mc must be >= 1");
  const Index d = env.dim_context;
  if (env.reward_params.leftCols(d).isZero(0.0) &&
      (env.reward_params.col(d).array() == env.reward_params(0, d)).all()) {
    const Matrix one = Matrix::Zero(1, d);
    return {env.MeanRewards(one)(0, 0), 0.0};
  }
  Rng rng = MakeRng(seed, Stream::kData);
  // Chunked to bound memory for large n_mc.
  constexpr std::size_t kChunk = 1 << 16;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t done = 0; done < n_mc; done += kChunk) {
    const std::size_t m = std::min(kChunk, n_mc - done);
    const Matrix x = SampleContexts(env.dim_context, m, rng);
    const Matrix q = env.MeanRewards(x);
    const ActionDistribution pi = eval_policy(x);
    if (pi.rows() != m || pi.n_actions() != env.n_actions) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "evaluation policy returned the wrong shape");
    }
    const Eigen::VectorXd v = (pi.probs().array() * q.array()).rowwise().sum();
    sum += v.sum();
    sum_sq += v.squaredNorm();
  }
  const double n = static_cast<double>(n_mc);
  const double mean = sum / n;
  const double var = n_mc > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1))
                              : 0.0;
  return {mean, std::sqrt(var / n)};
}

ClassificationDataset ClassificationDataset::Subset(
    std::span<const std::size_t> rows) const {
  ClassificationDataset out;
  out.features.resize(static_cast<Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) =
        features.row(static_cast<Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  out.n_classes = n_classes;
  return out;
}

void ValidateClassificationDataset(const ClassificationDataset& ds) {
  if (ds.n_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_classes must be >= 1");
  }
  if (static_cast<std::size_t>(ds.features.rows()) != ds.labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features and labels differ in length");
  }
  if (ds.labels.size() < static_cast<std::size_t>(ds.n_classes)) {
    throw Error(ErrorCode::kInvalidArgument, "fewer rows than classes");
  }
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    if (ds.labels[i] < 0 || ds.labels[i] >= ds.n_classes) {
      throw Error(ErrorCode::kActionOutOfRange,
                  "label out of range at row " + std::to_string(i), i);
    }
  }
}

ClassificationDataset MakeGaussianClassification(std::size_t n, int n_classes,
                                                 int dim, double class_sep,
                                                 std::uint64_t seed) {
  Rng rng = MakeRng(seed, Stream::kData);
  const Matrix centroids = RandomNormal(n_classes, dim, class_sep, rng);
  ClassificationDataset ds;
  ds.n_classes = n_classes;
  ds.features = RandomNormal(static_cast<Index>(n), dim, 1.0, rng);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label =
        static_cast<int>(UniformIndex(rng, static_cast<std::size_t>(n_classes)));
    ds.labels[i] = label;
    ds.features.row(static_cast<Index>(i)) += centroids.row(label);
  }
  ValidateClassificationDataset(ds);
  return ds;
}

std::pair<ClassificationDataset, ClassificationDataset> TrainTestSplit(
    const ClassificationDataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train_fraction must be in (0, 1)");
  }
  Rng rng = MakeRng(seed, Stream::kSplit);
  const std::vector<std::size_t> perm = Permutation(ds.size(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(ds.size())));
  std::vector<std::size_t> train(perm.begin(), perm.begin() + n_train);
  std::vector<std::size_t> test(perm.begin() + n_train, perm.end());
  return {ds.Subset(train), ds.Subset(test)};
}

ActionDistribution MixedPolicyDistribution(const MixedPolicy& policy,
                                           const Matrix& contexts,
                                           int n_actions) {
  if (!(policy.alpha >= 0.0 && policy.alpha <= 1.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange, "alpha must be in [0, 1]");
  }
  if (!policy.deterministic_choice && policy.alpha != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "a mixed policy with alpha > 0 needs a deterministic choice");
  }
  const double base = (1.0 - policy.alpha) / n_actions;
  Matrix probs = Matrix::Constant(contexts.rows(), n_actions, base);
  if (policy.alpha > 0.0) {
    for (Index i = 0; i < contexts.rows(); ++i) {
      const int a = policy.deterministic_choice(contexts.row(i));
      if (a < 0 || a >= n_actions) {
        throw Error(ErrorCode::kActionOutOfRange,
                    "deterministic policy returned an invalid action",
                    static_cast<std::size_t>(i));
      }
      probs(i, a) = policy.alpha + base;
    }
  }
  return ActionDistribution(std::move(probs));
}

DeterministicPolicy TrainClassifier(ClassifierKind kind,
                                    const ClassificationDataset& train,
                                    const ClassifierParams& params) {
  ValidateClassificationDataset(train);
  if (kind == ClassifierKind::kLogistic) {
    auto model = std::make_shared<SoftmaxModel>(
        FitSoftmax(train.features, train.labels, train.n_classes, params.c));
    return [model](const Eigen::Ref<const Eigen::RowVectorXd>& x) {
      Eigen::Index best;
      model->Logits(x).maxCoeff(&best);
      return static_cast<int>(best);
    };
  }
  BoostingParams bp;
  bp.learning_rate = params.learning_rate;
  bp.max_depth = params.max_depth;
  bp.min_samples_leaf = params.min_samples_leaf;
  bp.n_estimators = params.n_estimators;
  auto trees = std::make_shared<std::vector<BoostedTrees>>();
  for (int c = 0; c < train.n_classes; ++c) {
    Eigen::VectorXd y(static_cast<Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      y(static_cast<Index>(i)) = train.labels[i] == c ? 1.0 : 0.0;
    }
    trees->push_back(
        BoostedTrees::Fit(train.features, y, BoostingLoss::kLogistic, bp));
  }
  return [trees](const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < trees->size(); ++c) {
      const double s = (*trees)[c].PredictRaw(x);
      if (s > best_score) {
        best_score = s;
        best = static_cast<int>(c);
      }
    }
    return best;
  };
}

LoggedBanditFeedback ClassificationToFeedback(const ClassificationDataset& ds,
                                              const MixedPolicy& behavior,
                                              std::uint64_t seed) {
  ValidateClassificationDataset(ds);
  const ActionDistribution pi_b =
      MixedPolicyDistribution(behavior, ds.features, ds.n_classes);
  Rng rng = MakeRng(seed, Stream::kData);
  LoggedBanditFeedback fb;
  fb.contexts = ds.features;
  fb.n_actions = ds.n_classes;
  fb.r_max = 1.0;
  const std::size_t n = ds.size();
  fb.actions.resize(n);
  fb.rewards.resize(n);
  fb.propensities.emplace(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int a = SampleAction(pi_b.probs().row(static_cast<Index>(i)), rng);
    fb.actions[i] = a;
    fb.rewards[i] = a == ds.labels[i] ? 1.0 : 0.0;
    (*fb.propensities)[i] = pi_b(i, a);
  }
  return fb;
}

double ClassificationGroundTruth(const ClassificationDataset& ds_test,
                                 const ActionDistribution& eval_dist_at_test) {
  if (eval_dist_at_test.rows() != ds_test.size() ||
      eval_dist_at_test.n_actions() != ds_test.n_classes ||
      ds_test.size() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "evaluation distribution does not match the test set");
  }
  // Neumaier summation keeps e.g. the uniform policy's value at 1/|A|.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < ds_test.size(); ++i) {
    const double v = eval_dist_at_test(i, ds_test.labels[i]);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(ds_test.size());
}

}  // namespace ieoe
