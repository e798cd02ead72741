#ifndef IEOE_EVALUATOR_H_
#define IEOE_EVALUATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/ope_estimator.h"
#include "ieoe/scores.h"

namespace ieoe {

struct IeoeConfig {
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> bootstrap_size;  // default: size of the data
  int workers = 1;
  // Rethrow the first estimator failure (by seed order) instead of recording
  // it as an infinite, flagged squared error.
  bool fail_fast = false;
};

void ValidateIeoeConfig(const IeoeConfig& config);

// Seeds {start, ..., start + count - 1}.
std::vector<std::uint64_t> SeedRange(std::uint64_t start, std::size_t count);

// A candidate evaluation policy for Algorithm 1: its action distribution at
// every row of the logged data and its true policy value.
struct EvaluationPolicy {
  std::string name;
  ActionDistribution dist;
  double ground_truth = 0.0;
};

struct SeRecord {
  std::string estimator;
  std::uint64_t seed = 0;
  std::string policy_id;
  std::string theta_digest;
  double squared_error = 0.0;
  bool flagged = false;
};

// Records grouped by estimator (in registration order), then by seed order.
struct ResultSet {
  std::vector<std::string> estimators;
  std::vector<SeRecord> records;

  std::vector<double> SquaredErrors(const std::string& estimator,
                                    bool exclude_flagged = false) const;
  std::size_t FlaggedCount(const std::string& estimator) const;
};

using EstimatorList = std::vector<std::shared_ptr<const OffPolicyEstimator>>;

// Bootstrap indices for one seed: `size` draws uniformly with replacement
// from [0, n).
std::vector<std::size_t> BootstrapIndices(std::uint64_t seed, std::size_t n,
                                          std::size_t size);

// Synthetic/classification protocol: per seed, sample pi_e uniformly,
// bootstrap D, record (V(pi_e) - V_hat)^2 for every estimator.
ResultSet RunAlgorithm1(const IeoeConfig& config,
                        const LoggedBanditFeedback& data,
                        std::span<const EvaluationPolicy> policies,
                        const EstimatorList& estimators);

// One log and the name of the policy that collected it.
struct RealWorldLog {
  std::string name;
  LoggedBanditFeedback feedback;
};

// Real-world protocol over l >= 2 logs. policy_on_log[j][k] is the action
// distribution of the policy behind log j at the contexts of log k (needed
// for k != j). Per seed: pick j, bootstrap the union of the other logs, and
// score against the on-policy mean reward of log j.
ResultSet RunAlgorithm2(
    const IeoeConfig& config, std::span<const RealWorldLog> logs,
    const std::vector<std::vector<ActionDistribution>>& policy_on_log,
    const EstimatorList& estimators);

struct EstimatorSummary {
  std::string estimator;
  SummaryScores scores;
  std::size_t flagged = 0;
};

std::vector<EstimatorSummary> SummarizeResults(const ResultSet& results,
                                               double z_max, double cvar_alpha,
                                               bool exclude_flagged = false);

// 99th percentile of the pooled finite squared errors; falls back to the
// largest finite error, then to 1, when that percentile is not positive.
double AutoZMax(const ResultSet& results);

}  // namespace ieoe

#endif  // IEOE_EVALUATOR_H_
