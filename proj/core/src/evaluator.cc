#include "ieoe/evaluator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

#include <fmt/format.h>

#include "ieoe/error.h"
#include "ieoe/rng.h"

namespace ieoe {
namespace {

constexpr double kPosInf = std::numeric_limits<double>::infinity();

struct SeedOutcome {
  std::vector<SeRecord> records;  // one per estimator
  std::exception_ptr failure;
};

// Runs `body(seed_index)` for every seed on `workers` threads. Each seed writes
// only its own slot, so the output does not depend on scheduling.
template <typename Body>
std::vector<SeedOutcome> ForEachSeed(std::size_t n_seeds, int workers,
                                     bool fail_fast, const Body& body) {
  std::vector<SeedOutcome> out(n_seeds);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto work = [&] {
    for (;;) {
      if (fail_fast && stop.load()) return;
      std::size_t i = next.fetch_add(1);
      if (i >= n_seeds) return;
      try {
        out[i].records = body(i);
      } catch (...) {
        out[i].failure = std::current_exception();
        stop.store(true);
      }
    }
  };
  const int n_threads =
      static_cast<int>(std::min<std::size_t>(std::max(workers, 1), n_seeds));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& o : out) {
    if (o.failure) std::rethrow_exception(o.failure);
  }
  return out;
}

std::vector<SeRecord> ScoreTrial(const Trial& trial,
                                 const std::string& policy_id,
                                 const EstimatorList& estimators,
                                 bool fail_fast) {
  std::vector<SeRecord> records;
  records.reserve(estimators.size());
  for (const auto& est : estimators) {
    SeRecord rec;
    rec.estimator = est->name();
    rec.seed = trial.seed;
    rec.policy_id = policy_id;
    try {
      TrialEstimate e = est->Estimate(trial);
      double diff = trial.ground_truth - e.value;
      rec.theta_digest = std::move(e.theta_digest);
      rec.squared_error = diff * diff;
      if (!std::isfinite(rec.squared_error)) {
        throw Error(ErrorCode::kEstimatorFailure, "non-finite estimate");
      }
    } catch (const std::exception& ex) {
      if (fail_fast) {
        throw Error(ErrorCode::kEstimatorFailure,
                    fmt::format("estimator '{}' failed on seed {}: {}",
                                est->name(), trial.seed, ex.what()));
      }
      rec.theta_digest = fmt::format("failed: {}", ex.what());
      std::replace(rec.theta_digest.begin(), rec.theta_digest.end(), '\n', ' ');
      rec.squared_error = kPosInf;
      rec.flagged = true;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

ResultSet Collect(const EstimatorList& estimators,
                  std::vector<SeedOutcome> outcomes) {
  ResultSet rs;
  for (const auto& e : estimators) rs.estimators.push_back(e->name());
  rs.records.reserve(estimators.size() * outcomes.size());
  for (std::size_t j = 0; j < estimators.size(); ++j) {
    for (auto& o : outcomes) rs.records.push_back(std::move(o.records[j]));
  }
  return rs;
}

void CheckEstimators(const EstimatorList& estimators) {
  if (estimators.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no estimators given");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    if (!estimators[i]) {
      throw Error(ErrorCode::kInvalidArgument, "null estimator", i);
    }
    if (!names.insert(estimators[i]->name()).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("duplicate estimator name '{}'",
                              estimators[i]->name()),
                  i);
    }
  }
}

}  // namespace

void ValidateIeoeConfig(const IeoeConfig& config) {
  if (config.seeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "seed set is empty");
  }
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    if (!seen.insert(config.seeds[i]).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("seed {} repeated", config.seeds[i]), i);
    }
  }
  if (config.bootstrap_size && *config.bootstrap_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bootstrap_size must be >= 1");
  }
  if (config.workers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  }
}

std::vector<std::uint64_t> SeedRange(std::uint64_t start, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = start + i;
  return seeds;
}

std::vector<double> ResultSet::SquaredErrors(const std::string& estimator,
                                             bool exclude_flagged) const {
  std::vector<double> z;
  for (const auto& r : records) {
    if (r.estimator != estimator) continue;
    if (exclude_flagged && r.flagged) continue;
    z.push_back(r.squared_error);
  }
  return z;
}

std::size_t ResultSet::FlaggedCount(const std::string& estimator) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [&](const SeRecord& r) {
        return r.estimator == estimator && r.flagged;
      }));
}

std::vector<std::size_t> BootstrapIndices(std::uint64_t seed, std::size_t n,
                                          std::size_t size) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "cannot bootstrap 0 rows");
  Rng rng = MakeRng(seed, Stream::kBootstrap);
  std::vector<std::size_t> idx(size);
  for (auto& i : idx) i = UniformIndex(rng, n);
  return idx;
}

ResultSet RunAlgorithm1(const IeoeConfig& config,
                        const LoggedBanditFeedback& data,
                        std::span<const EvaluationPolicy> policies,
                        const EstimatorList& estimators) {
  ValidateIeoeConfig(config);
  ValidateFeedback(data);
  CheckEstimators(estimators);
  if (policies.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation policy set is empty");
  }
  for (std::size_t j = 0; j < policies.size(); ++j) {
    if (policies[j].dist.rows() != data.size() ||
        policies[j].dist.n_actions() != data.n_actions) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("policy '{}' does not match the data",
                              policies[j].name),
                  j);
    }
  }
  const std::size_t size = config.bootstrap_size.value_or(data.size());

  auto body = [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    Rng policy_rng = MakeRng(seed, Stream::kPolicy);
    const std::size_t j = UniformIndex(policy_rng, policies.size());
    const auto idx = BootstrapIndices(seed, data.size(), size);
    const LoggedBanditFeedback boot = data.Subset(idx);
    const ActionDistribution eval = policies[j].dist.Subset(idx);
    Trial trial{seed, j, &boot, &eval, policies[j].ground_truth};
    return ScoreTrial(trial, policies[j].name, estimators, config.fail_fast);
  };
  return Collect(estimators, ForEachSeed(config.seeds.size(), config.workers,
                                         config.fail_fast, body));
}

ResultSet RunAlgorithm2(
    const IeoeConfig& config, std::span<const RealWorldLog> logs,
    const std::vector<std::vector<ActionDistribution>>& policy_on_log,
    const EstimatorList& estimators) {
  ValidateIeoeConfig(config);
  CheckEstimators(estimators);
  const std::size_t l = logs.size();
  if (l < 2) {
    throw Error(ErrorCode::kFewerThanTwoDatasets,
                fmt::format("need at least 2 logs, got {}", l));
  }
  if (policy_on_log.size() != l) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one row of policy distributions per log is required");
  }
  for (std::size_t k = 0; k < l; ++k) {
    ValidateFeedback(logs[k].feedback);
    if (logs[k].feedback.n_actions != logs[0].feedback.n_actions ||
        logs[k].feedback.dim() != logs[0].feedback.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "logs differ in action count or context dimension", k);
    }
    if (policy_on_log[k].size() != l) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("policy '{}' needs a distribution per log",
                              logs[k].name),
                  k);
    }
  }

  // D_ev and pi_j on D_ev for each choice of test log j.
  struct Split {
    LoggedBanditFeedback ev;
    ActionDistribution eval;
    double v_on = 0.0;
  };
  std::vector<Split> splits(l);
  const int n_actions = logs[0].feedback.n_actions;
  for (std::size_t j = 0; j < l; ++j) {
    std::size_t n_ev = 0;
    for (std::size_t k = 0; k < l; ++k) {
      if (k == j) continue;
      n_ev += logs[k].feedback.size();
      const auto& d = policy_on_log[j][k];
      if (d.rows() != logs[k].feedback.size() || d.n_actions() != n_actions) {
        throw Error(ErrorCode::kDimensionMismatch,
                    fmt::format("policy '{}' on log '{}' has the wrong shape",
                                logs[j].name, logs[k].name),
                    k);
      }
    }
    LoggedBanditFeedback& ev = splits[j].ev;
    ev.n_actions = n_actions;
    ev.r_max = 0.0;
    ev.contexts.resize(static_cast<Eigen::Index>(n_ev),
                       static_cast<Eigen::Index>(logs[0].feedback.dim()));
    Matrix probs(static_cast<Eigen::Index>(n_ev), n_actions);
    bool all_props = true;
    for (std::size_t k = 0; k < l; ++k) {
      if (k != j && !logs[k].feedback.propensities) all_props = false;
    }
    if (all_props) ev.propensities.emplace();
    Eigen::Index at = 0;
    for (std::size_t k = 0; k < l; ++k) {
      if (k == j) continue;
      const auto& fb = logs[k].feedback;
      const auto rows = static_cast<Eigen::Index>(fb.size());
      ev.contexts.middleRows(at, rows) = fb.contexts;
      probs.middleRows(at, rows) = policy_on_log[j][k].probs();
      ev.actions.insert(ev.actions.end(), fb.actions.begin(), fb.actions.end());
      ev.rewards.insert(ev.rewards.end(), fb.rewards.begin(), fb.rewards.end());
      if (all_props) {
        ev.propensities->insert(ev.propensities->end(),
                                fb.propensities->begin(),
                                fb.propensities->end());
      }
      ev.r_max = std::max(ev.r_max, fb.r_max);
      at += rows;
    }
    splits[j].eval = ActionDistribution(std::move(probs));
    const auto& te = logs[j].feedback.rewards;
    double sum = 0.0;
    for (double r : te) sum += r;
    splits[j].v_on = sum / static_cast<double>(te.size());
  }

  auto body = [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    Rng policy_rng = MakeRng(seed, Stream::kPolicy);
    const std::size_t j = UniformIndex(policy_rng, l);
    const Split& split = splits[j];
    const auto idx = BootstrapIndices(
        seed, split.ev.size(), config.bootstrap_size.value_or(split.ev.size()));
    const LoggedBanditFeedback boot = split.ev.Subset(idx);
    const ActionDistribution eval = split.eval.Subset(idx);
    Trial trial{seed, j, &boot, &eval, split.v_on};
    return ScoreTrial(trial, logs[j].name, estimators, config.fail_fast);
  };
  return Collect(estimators, ForEachSeed(config.seeds.size(), config.workers,
                                         config.fail_fast, body));
}

std::vector<EstimatorSummary> SummarizeResults(const ResultSet& results,
                                               double z_max, double cvar_alpha,
                                               bool exclude_flagged) {
  std::vector<EstimatorSummary> out;
  for (const auto& name : results.estimators) {
    EstimatorSummary s;
    s.estimator = name;
    s.flagged = results.FlaggedCount(name);
    auto z = results.SquaredErrors(name, exclude_flagged);
    if (z.empty()) {
      // Every record was flagged and excluded.
      const double nan = std::numeric_limits<double>::quiet_NaN();
      s.scores = {nan, nan, nan, nan};
    } else {
      s.scores = Summarize(z, z_max, cvar_alpha);
    }
    out.push_back(s);
  }
  return out;
}

double AutoZMax(const ResultSet& results) {
  std::vector<double> pooled;
  for (const auto& r : results.records) {
    if (std::isfinite(r.squared_error)) pooled.push_back(r.squared_error);
  }
  if (pooled.empty()) return 1.0;
  double q = EmpiricalQuantile(pooled, 0.99);
  if (q > 0.0) return q;
  double mx = *std::max_element(pooled.begin(), pooled.end());
  return mx > 0.0 ? mx : 1.0;
}

}  // namespace ieoe
