#include "ieoe/ope_estimator.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "ieoe/error.h"
#include "ieoe/rng.h"
#include "ieoe/tuning.h"

namespace ieoe {
namespace {

std::string FormatParam(double v) {
  return std::isinf(v) ? std::string("inf") : fmt::format("{:.6g}", v);
}

template <typename T>
const T& PickUniform(const std::vector<T>& items, Rng& rng) {
  return items[UniformIndex(rng, items.size())];
}

ModelSpec DrawModelSpec(const ModelChoice& choice, SamplerMode sampler,
                        const LoggedBanditFeedback& data, int n_iter,
                        SearchTarget target, Rng& rng) {
  if (sampler == SamplerMode::kUniformRandom) {
    return SampleModelSpec(choice.family, choice.space, rng);
  }
  return RandomSearch(choice.space, choice.family, data, n_iter, rng(), target);
}

// Reward predictions on the rows covered by the folds, stacked in fold order,
// together with the matching row list.
std::pair<std::vector<std::size_t>, RewardPredictionMatrix> StackFolds(
    std::span<const FoldPrediction> folds, int n_actions) {
  std::size_t total = 0;
  for (const auto& f : folds) total += f.rows.size();
  std::vector<std::size_t> rows;
  rows.reserve(total);
  RewardPredictionMatrix q{Matrix(static_cast<Eigen::Index>(total), n_actions)};
  Eigen::Index at = 0;
  for (const auto& f : folds) {
    rows.insert(rows.end(), f.rows.begin(), f.rows.end());
    q.values.middleRows(at, f.q_hat.values.rows()) = f.q_hat.values;
    at += f.q_hat.values.rows();
  }
  return {std::move(rows), std::move(q)};
}

}  // namespace

std::vector<ModelChoice> DefaultRewardModels(bool binary_rewards) {
  ModelFamily linear = binary_rewards ? ModelFamily::kLogistic
                                      : ModelFamily::kRidge;
  return {{linear, DefaultSpace(linear)},
          {ModelFamily::kBoosting, DefaultSpace(ModelFamily::kBoosting)}};
}

std::vector<ModelChoice> DefaultBehaviorModels() {
  return {{ModelFamily::kLogistic, DefaultSpace(ModelFamily::kLogistic)},
          {ModelFamily::kBoosting, DefaultSpace(ModelFamily::kBoosting)}};
}

void ValidateEstimatorSettings(const EstimatorSettings& s) {
  if (s.name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "estimator name is empty");
  }
  if (ShrinkageParamOf(s.kind) != ShrinkageParam::kNone) {
    if (s.grid.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("estimator '{}': grid is empty", s.name));
    }
    for (double v : s.grid) {
      if (!(v >= 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("estimator '{}': grid value {} is negative",
                                s.name, v));
      }
    }
  }
  if (UsesRewardModel(s.kind)) {
    if (s.space.reward_models.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("estimator '{}': no reward models", s.name));
    }
    if (s.space.k_folds.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("estimator '{}': no fold counts", s.name));
    }
    for (int k : s.space.k_folds) {
      if (k < 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("estimator '{}': K = {} < 1", s.name, k));
      }
    }
    for (const auto& m : s.space.reward_models) ValidateSpace(m.space);
  }
  if (UsesWeights(s.kind) && s.propensity == PropensityMode::kEstimated) {
    if (s.space.behavior_models.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("estimator '{}': no behavior models", s.name));
    }
    for (const auto& m : s.space.behavior_models) ValidateSpace(m.space);
  }
  if (s.space.random_search_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "random_search_iter < 1");
  }
  if (!(s.space.delta > 0.0 && s.space.delta < 1.0)) {
    throw Error(ErrorCode::kDeltaOutOfRange,
                fmt::format("delta = {} outside (0, 1)", s.space.delta));
  }
}

ConfiguredEstimator::ConfiguredEstimator(EstimatorSettings settings)
    : settings_(std::move(settings)) {
  ValidateEstimatorSettings(settings_);
}

TrialEstimate ConfiguredEstimator::Estimate(const Trial& trial) const {
  const LoggedBanditFeedback& data = *trial.data;
  const ActionDistribution& eval = *trial.eval_dist;
  const auto& space = settings_.space;
  const EstimatorKind kind = settings_.kind;
  const std::uint64_t key = StableHash(settings_.name);
  Rng rng = MakeRng(trial.seed, Stream::kHyperparam, key);
  Rng model_rng = MakeRng(trial.seed, Stream::kModel, key);

  EstimatorHyperparams theta;
  std::vector<std::string> digest;

  if (UsesRewardModel(kind)) {
    const ModelChoice& choice = PickUniform(space.reward_models, rng);
    theta.k_folds = PickUniform(space.k_folds, rng);
    theta.reward_model =
        DrawModelSpec(choice, settings_.sampler, data, space.random_search_iter,
                      SearchTarget::kRewardModel, rng);
    digest.push_back("q=" + theta.reward_model.Digest());
    digest.push_back(fmt::format("K={}", theta.k_folds));
  }

  ImportanceWeights weights;
  if (UsesWeights(kind)) {
    if (settings_.propensity == PropensityMode::kTrue) {
      weights = ComputeImportanceWeights(eval, data, LoggedTruePropensities{});
    } else {
      const ModelChoice& choice = PickUniform(space.behavior_models, rng);
      ModelSpec spec =
          DrawModelSpec(choice, settings_.sampler, data,
                        space.random_search_iter,
                        SearchTarget::kBehaviorPolicy, rng);
      Calibration calibration = NoCalibration{};
      if (space.calibration) calibration = *space.calibration;
      FittedPolicyModel model =
          FitBehaviorPolicy(spec, data, calibration, model_rng());
      Matrix probs = model.PredictDist(data.contexts).probs();
      std::size_t floored = FloorPropensities(probs, kPropensityFloor);
      weights = ComputeImportanceWeights(
          eval, data,
          EstimatedPropensities{ActionDistribution(std::move(probs))});
      digest.push_back("pi_b=" + spec.Digest());
      digest.push_back(fmt::format("T={:.6g}", model.temperature()));
      digest.push_back(fmt::format("floored={}", floored));
    }
  }

  std::vector<FoldPrediction> folds;
  if (UsesRewardModel(kind)) {
    folds = CrossFitRewardMatrices(theta.reward_model, data, theta.k_folds,
                                   model_rng());
  }

  const ShrinkageParam knob = ShrinkageParamOf(kind);
  if (knob != ShrinkageParam::kNone) {
    double chosen;
    if (settings_.sampler == SamplerMode::kUniformRandom) {
      chosen = PickUniform(settings_.grid, rng);
    } else if (UsesRewardModel(kind)) {
      auto [rows, q] = StackFolds(folds, data.n_actions);
      LoggedBanditFeedback sub = data.Subset(rows);
      chosen = SelectHyperparameter(kind, settings_.grid, sub, eval.Subset(rows),
                                    weights.Subset(rows), q, space.delta);
    } else {
      chosen = SelectHyperparameter(
          kind, settings_.grid, data, eval, weights,
          RewardPredictionMatrix::Constant(data.size(), data.n_actions, 0.0),
          space.delta);
    }
    if (knob == ShrinkageParam::kLambda) {
      theta.lambda = chosen;
      digest.push_back("lambda=" + FormatParam(chosen));
    } else {
      theta.tau = chosen;
      digest.push_back("tau=" + FormatParam(chosen));
    }
  }

  double value;
  if (UsesRewardModel(kind)) {
    value = CrossFitEstimate(data, eval, weights, kind, theta, folds).value;
  } else {
    value = ieoe::Estimate(kind, data, eval, weights, nullptr, theta).value;
  }

  std::string joined;
  for (const auto& part : digest) {
    if (!joined.empty()) joined += ';';
    joined += part;
  }
  if (joined.empty()) joined = "-";
  return {value, std::move(joined)};
}

}  // namespace ieoe
