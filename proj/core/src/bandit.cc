#include "ieoe/bandit.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ieoe/error.h"

namespace ieoe {
namespace {

Matrix TakeRows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

template <typename T>
std::vector<T> TakeElems(const std::vector<T>& v,
                         std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(v[r]);
  return out;
}

}  // namespace

LoggedBanditFeedback LoggedBanditFeedback::Subset(
    std::span<const std::size_t> rows) const {
  LoggedBanditFeedback out;
  out.contexts = TakeRows(contexts, rows);
  out.actions = TakeElems(actions, rows);
  out.rewards = TakeElems(rewards, rows);
  if (propensities) out.propensities = TakeElems(*propensities, rows);
  out.n_actions = n_actions;
  out.r_max = r_max;
  return out;
}

void ValidateFeedback(const LoggedBanditFeedback& fb) {
  const std::size_t n = fb.actions.size();
  if (n == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "feedback has no rows");
  }
  if (static_cast<std::size_t>(fb.contexts.rows()) != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "contexts have " + std::to_string(fb.contexts.rows()) +
                    " rows, actions have " + std::to_string(n),
                std::min<std::size_t>(n, fb.contexts.rows()));
  }
  if (fb.rewards.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "rewards length " + std::to_string(fb.rewards.size()) +
                    " != " + std::to_string(n),
                std::min(n, fb.rewards.size()));
  }
  if (fb.propensities && fb.propensities->size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "propensities length " +
                    std::to_string(fb.propensities->size()) + " != " +
                    std::to_string(n),
                std::min(n, fb.propensities->size()));
  }
  if (fb.n_actions <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_actions must be positive");
  }
  if (!(fb.r_max > 0.0) || !std::isfinite(fb.r_max)) {
    throw Error(ErrorCode::kInvalidArgument, "r_max must be positive");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (fb.actions[i] < 0 || fb.actions[i] >= fb.n_actions) {
      throw Error(ErrorCode::kActionOutOfRange,
                  "action " + std::to_string(fb.actions[i]) + " at row " +
                      std::to_string(i),
                  i);
    }
    const double r = fb.rewards[i];
    if (!(r >= 0.0 && r <= fb.r_max)) {
      throw Error(ErrorCode::kRewardOutOfRange,
                  "reward " + std::to_string(r) + " at row " +
                      std::to_string(i) + " outside [0, r_max]",
                  i);
    }
    if (fb.propensities) {
      const double p = (*fb.propensities)[i];
      if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kNonpositivePropensity,
                    "propensity " + std::to_string(p) + " at row " +
                        std::to_string(i),
                    i);
      }
    }
  }
}

ActionDistribution::ActionDistribution(Matrix probs) : probs_(std::move(probs)) {
  for (Eigen::Index i = 0; i < probs_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index a = 0; a < probs_.cols(); ++a) {
      const double p = probs_(i, a);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::kInvalidDistribution,
                    "negative or non-finite probability at row " +
                        std::to_string(i),
                    static_cast<std::size_t>(i));
      }
      sum += p;
    }
    const double dev = std::abs(sum - 1.0);
    if (dev > kRenormalizeTolerance) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "row " + std::to_string(i) + " sums to " +
                      std::to_string(sum),
                  static_cast<std::size_t>(i));
    }
    if (dev > kRowSumTolerance) probs_.row(i) /= sum;
  }
}

ActionDistribution ActionDistribution::Uniform(std::size_t n, int n_actions) {
  return ActionDistribution(
      Matrix::Constant(static_cast<Eigen::Index>(n), n_actions,
                       1.0 / n_actions));
}

ActionDistribution ActionDistribution::Subset(
    std::span<const std::size_t> rows) const {
  ActionDistribution out;
  out.probs_ = TakeRows(probs_, rows);
  return out;
}

ImportanceWeights ImportanceWeights::Subset(
    std::span<const std::size_t> rows) const {
  ImportanceWeights out;
  out.weights = TakeElems(weights, rows);
  out.rho_max = 0.0;
  for (double w : out.weights) out.rho_max = std::max(out.rho_max, w);
  return out;
}

RewardPredictionMatrix RewardPredictionMatrix::Subset(
    std::span<const std::size_t> rows) const {
  return {TakeRows(values, rows)};
}

RewardPredictionMatrix RewardPredictionMatrix::Constant(std::size_t n,
                                                        int n_actions,
                                                        double value) {
  return {Matrix::Constant(static_cast<Eigen::Index>(n), n_actions, value)};
}

std::vector<double> LoggedPropensities(const LoggedBanditFeedback& fb,
                                       const PropensitySource& source) {
  const std::size_t n = fb.size();
  if (std::holds_alternative<LoggedTruePropensities>(source)) {
    if (!fb.propensities) {
      throw Error(ErrorCode::kMissingPropensities,
                  "feedback carries no logged propensities");
    }
    return *fb.propensities;
  }
  const auto& est = std::get<EstimatedPropensities>(source).distribution;
  if (est.rows() != n || est.n_actions() != fb.n_actions) {
    throw Error(ErrorCode::kDimensionMismatch,
                "estimated behavior distribution shape does not match feedback");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = est(i, fb.actions[i]);
    if (!(p > 0.0)) {
      throw Error(ErrorCode::kZeroEstimatedPropensity,
                  "estimated propensity is zero at row " + std::to_string(i),
                  i);
    }
    out[i] = p;
  }
  return out;
}

ImportanceWeights ComputeImportanceWeights(const ActionDistribution& eval_dist,
                                           const LoggedBanditFeedback& fb,
                                           const PropensitySource& source) {
  const std::size_t n = fb.size();
  if (eval_dist.rows() != n || eval_dist.n_actions() != fb.n_actions) {
    throw Error(ErrorCode::kDimensionMismatch,
                "evaluation distribution shape does not match feedback");
  }
  const std::vector<double> behavior = LoggedPropensities(fb, source);
  ImportanceWeights out;
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.weights[i] = eval_dist(i, fb.actions[i]) / behavior[i];
    out.rho_max = std::max(out.rho_max, out.weights[i]);
  }
  return out;
}

}  // namespace ieoe
