#ifndef IEOE_IO_CONFIG_H_
#define IEOE_IO_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ieoe/datagen.h"
#include "ieoe/model_spec.h"
#include "ieoe/ope_estimator.h"

namespace ieoe::io {

enum class ExperimentMode { kSynthetic, kClassification, kRealWorld };

std::string_view ExperimentModeName(ExperimentMode mode);

struct EstimatorEntry {
  std::string name;
  std::string kind;  // an estimator kind name or "oracle"
  std::vector<double> grid;
};

// A model family with its search space. Family "linear" means logistic on
// binary rewards and ridge otherwise.
struct ModelEntry {
  std::string family;
  HyperparamSpace space;
};

struct ModelSpaceConfig {
  std::vector<ModelEntry> reward_models;
  std::vector<ModelEntry> behavior_models;
  std::vector<int> k_folds = {1, 2, 3, 4, 5};
  int random_search_iter = 5;
  double delta = 0.05;
  bool temperature_scaling = true;
  double holdout_fraction = 0.5;
};

// Synthetic-mode evaluation policy: alpha-mixture of the uniform policy and
// the argmax ("optimal"), argmin ("worst") or uniform choice of true q.
struct SyntheticPolicyEntry {
  std::string name;
  std::string base = "optimal";
  double alpha = 0.0;
};

struct SyntheticSource {
  int dim_context = 5;
  int n_actions = 10;
  RewardKind reward_kind = RewardKind::kBinary;
  double behavior_scale = 1.0;
  std::uint64_t env_seed = 0;
  std::uint64_t data_seed = 1;
  std::size_t n = 1000;
  std::size_t n_mc = 100000;
  std::vector<SyntheticPolicyEntry> policies;
};

// Classification-mode policy: alpha-mixture of a classifier ("logistic",
// "boosting") or "uniform" with the uniform policy.
struct ClassificationPolicyEntry {
  std::string name;
  std::string family = "logistic";
  double alpha = 0.0;
};

struct ClassificationSource {
  std::optional<std::filesystem::path> csv;
  // Generated Gaussian clusters when no csv is given.
  std::size_t n = 5000;
  int n_classes = 10;
  int dim = 10;
  double class_sep = 1.5;
  std::uint64_t data_seed = 0;
  double train_fraction = 0.3;
  std::uint64_t split_seed = 0;
  ClassificationPolicyEntry behavior{"behavior", "logistic", 0.9};
  std::vector<ClassificationPolicyEntry> policies;
  ClassifierParams classifier;
};

struct RealWorldLogEntry {
  std::string name;
  std::filesystem::path feedback;
  std::filesystem::path policy;
};

struct RealWorldSource {
  std::vector<RealWorldLogEntry> logs;
};

struct OutputConfig {
  std::optional<std::filesystem::path> dir;
  std::optional<double> z_max;  // auto when unset
  double cvar_alpha = 0.7;
  bool exclude_flagged = false;
  bool plot = true;
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kSynthetic;
  std::uint64_t seed_start = 0;
  std::size_t seed_count = 0;
  SamplerMode sampler = SamplerMode::kTunedEstimatorParams;
  PropensityMode propensity = PropensityMode::kTrue;
  std::optional<std::size_t> bootstrap_size;
  bool fail_fast = false;
  int workers = 1;
  std::vector<EstimatorEntry> estimators;
  ModelSpaceConfig model_space;
  SyntheticSource synthetic;
  ClassificationSource classification;
  RealWorldSource realworld;
  OutputConfig outputs;
};

// Default evaluation policies: logistic and boosting classifiers at
// alpha 0.8 and 0.2, plus the uniform policy.
std::vector<ClassificationPolicyEntry> DefaultClassificationPolicies();
std::vector<SyntheticPolicyEntry> DefaultSyntheticPolicies();

// Parses a JSON document (comments allowed). Relative file paths resolve
// against `base_dir`. Throws kParseError (with line and column) or
// kValidationError naming the offending field.
ExperimentConfig ParseConfig(std::string_view text,
                             const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path);

}  // namespace ieoe::io

#endif  // IEOE_IO_CONFIG_H_
