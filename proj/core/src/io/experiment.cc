#include "ieoe/io/experiment.h"

#include <fmt/format.h>

#include "ieoe/error.h"
#include "ieoe/io/csv.h"
#include "ieoe/reward_models.h"

namespace ieoe::io {
namespace {

DeterministicPolicy ArgOfTrueReward(const SyntheticEnvironment& env,
                                    bool maximize) {
  return [env, maximize](const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    Matrix row = x;
    Eigen::RowVectorXd q = env.MeanRewards(row).row(0);
    Eigen::Index best = 0;
    if (maximize) {
      q.maxCoeff(&best);
    } else {
      q.minCoeff(&best);
    }
    return static_cast<int>(best);
  };
}

ModelChoice Resolve(const ModelEntry& entry, bool binary_rewards) {
  ModelFamily family;
  if (entry.family == "linear") {
    family = binary_rewards ? ModelFamily::kLogistic : ModelFamily::kRidge;
  } else {
    family = *ParseModelFamily(entry.family);
  }
  return {family, entry.space.empty() ? DefaultSpace(family) : entry.space};
}

}  // namespace

Algorithm1Inputs PrepareSynthetic(const SyntheticSource& src) {
  SyntheticEnvironment env =
      SyntheticEnvironment::Make(src.dim_context, src.n_actions,
                                 src.reward_kind, src.env_seed,
                                 src.behavior_scale);
  Algorithm1Inputs in;
  in.data = GenerateSyntheticFeedback(env, src.n, src.data_seed).feedback;
  for (const auto& p : src.policies) {
    MixedPolicy mixed;
    mixed.alpha = p.alpha;
    if (p.base == "optimal") {
      mixed.deterministic_choice = ArgOfTrueReward(env, true);
    } else if (p.base == "worst") {
      mixed.deterministic_choice = ArgOfTrueReward(env, false);
    } else {
      mixed.alpha = 0.0;
    }
    PolicyFn fn = [mixed, n_actions = env.n_actions](const Matrix& x) {
      return MixedPolicyDistribution(mixed, x, n_actions);
    };
    EvaluationPolicy ep;
    ep.name = p.name;
    ep.dist = fn(in.data.contexts);
    ep.ground_truth = TruePolicyValue(env, fn, src.n_mc, src.env_seed).value;
    in.policies.push_back(std::move(ep));
  }
  return in;
}

Algorithm1Inputs PrepareClassification(const ClassificationSource& src) {
  ClassificationDataset ds =
      src.csv ? LoadClassificationCsv(*src.csv)
              : MakeGaussianClassification(src.n, src.n_classes, src.dim,
                                           src.class_sep, src.data_seed);
  auto [train, test] = TrainTestSplit(ds, src.train_fraction, src.split_seed);
  ValidateClassificationDataset(train);

  DeterministicPolicy logistic, boosting;
  auto classifier = [&](const std::string& family) -> DeterministicPolicy {
    if (family == "logistic") {
      if (!logistic) {
        logistic = TrainClassifier(ClassifierKind::kLogistic, train,
                                   src.classifier);
      }
      return logistic;
    }
    if (family == "boosting") {
      if (!boosting) {
        boosting = TrainClassifier(ClassifierKind::kBoosting, train,
                                   src.classifier);
      }
      return boosting;
    }
    return nullptr;
  };
  auto mixed = [&](const ClassificationPolicyEntry& e) {
    MixedPolicy m;
    m.deterministic_choice = classifier(e.family);
    m.alpha = m.deterministic_choice ? e.alpha : 0.0;
    return m;
  };

  Algorithm1Inputs in;
  in.data = ClassificationToFeedback(test, mixed(src.behavior), src.data_seed);
  for (const auto& p : src.policies) {
    EvaluationPolicy ep;
    ep.name = p.name;
    ep.dist = MixedPolicyDistribution(mixed(p), test.features, ds.n_classes);
    ep.ground_truth = ClassificationGroundTruth(test, ep.dist);
    in.policies.push_back(std::move(ep));
  }
  return in;
}

Algorithm2Inputs PrepareRealWorld(const RealWorldSource& src,
                                  bool require_propensities) {
  Algorithm2Inputs in;
  std::vector<PolicyTable> tables;
  for (const auto& entry : src.logs) tables.push_back(LoadPolicyCsv(entry.policy));
  const int n_actions = tables.front().n_actions;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (tables[k].n_actions != n_actions || tables[k].dim != tables[0].dim) {
      throw Error(ErrorCode::kSchemaViolation,
                  fmt::format("policy file for '{}' differs in shape from the "
                              "first",
                              src.logs[k].name),
                  k);
    }
  }
  FeedbackCsvOptions options;
  options.require_propensities = require_propensities;
  options.n_actions = n_actions;
  for (const auto& entry : src.logs) {
    in.logs.push_back({entry.name, LoadFeedbackCsv(entry.feedback, options)});
  }
  double r_max = 0.0;
  for (const auto& log : in.logs) r_max = std::max(r_max, log.feedback.r_max);
  for (auto& log : in.logs) log.feedback.r_max = r_max;
  for (std::size_t j = 0; j < in.logs.size(); ++j) {
    std::vector<ActionDistribution> row;
    for (std::size_t k = 0; k < in.logs.size(); ++k) {
      if (k == j) {
        row.emplace_back();
        continue;
      }
      try {
        row.push_back(tables[j].Lookup(in.logs[k].feedback.contexts));
      } catch (const Error& e) {
        throw Error(e.code(),
                    fmt::format("policy '{}' on log '{}': {}", src.logs[j].name,
                                src.logs[k].name, e.what()),
                    e.index());
      }
    }
    in.policy_on_log.push_back(std::move(row));
  }
  return in;
}

EstimatorList BuildEstimators(const ExperimentConfig& config,
                              bool binary_rewards) {
  HyperparamSpaceConfig space;
  for (const auto& m : config.model_space.reward_models) {
    space.reward_models.push_back(Resolve(m, binary_rewards));
  }
  for (const auto& m : config.model_space.behavior_models) {
    space.behavior_models.push_back(Resolve(m, binary_rewards));
  }
  space.k_folds = config.model_space.k_folds;
  space.random_search_iter = config.model_space.random_search_iter;
  space.delta = config.model_space.delta;
  if (config.model_space.temperature_scaling) {
    space.calibration = TemperatureScaling{config.model_space.holdout_fraction};
  } else {
    space.calibration.reset();
  }
  EstimatorList out;
  for (const auto& e : config.estimators) {
    if (e.kind == "oracle") {
      out.push_back(std::make_shared<GroundTruthOracle>(e.name));
      continue;
    }
    EstimatorSettings s;
    s.name = e.name;
    s.kind = *ParseEstimatorKind(e.kind);
    s.grid = e.grid;
    s.sampler = config.sampler;
    s.propensity = config.propensity;
    s.space = space;
    out.push_back(std::make_shared<ConfiguredEstimator>(std::move(s)));
  }
  return out;
}

IeoeConfig ToIeoeConfig(const ExperimentConfig& config) {
  IeoeConfig c;
  c.seeds = SeedRange(config.seed_start, config.seed_count);
  c.bootstrap_size = config.bootstrap_size;
  c.workers = config.workers;
  c.fail_fast = config.fail_fast;
  return c;
}

bool NeedsLoggedPropensities(const ExperimentConfig& config) {
  if (config.propensity != PropensityMode::kTrue) return false;
  for (const auto& e : config.estimators) {
    auto kind = ParseEstimatorKind(e.kind);
    if (kind && UsesWeights(*kind)) return true;
  }
  return false;
}

ResultSet RunExperiment(const ExperimentConfig& config) {
  const IeoeConfig ieoe = ToIeoeConfig(config);
  switch (config.mode) {
    case ExperimentMode::kSynthetic: {
      auto in = PrepareSynthetic(config.synthetic);
      auto est = BuildEstimators(config, HasBinaryRewards(in.data));
      return RunAlgorithm1(ieoe, in.data, in.policies, est);
    }
    case ExperimentMode::kClassification: {
      auto in = PrepareClassification(config.classification);
      auto est = BuildEstimators(config, true);
      return RunAlgorithm1(ieoe, in.data, in.policies, est);
    }
    case ExperimentMode::kRealWorld: {
      auto in = PrepareRealWorld(config.realworld,
                                 NeedsLoggedPropensities(config));
      bool binary = true;
      for (const auto& log : in.logs) binary = binary && HasBinaryRewards(log.feedback);
      auto est = BuildEstimators(config, binary);
      return RunAlgorithm2(ieoe, in.logs, in.policy_on_log, est);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown experiment mode");
}

}  // namespace ieoe::io
