#ifndef IEOE_BANDIT_H_
#define IEOE_BANDIT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ieoe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One logged dataset D = {(x_i, a_i, r_i)}, optionally with the behavior
// policy's probability of each logged action.
struct LoggedBanditFeedback {
  Matrix contexts;  // n x d
  std::vector<int> actions;
  std::vector<double> rewards;
  std::optional<std::vector<double>> propensities;
  int n_actions = 0;
  double r_max = 1.0;

  std::size_t size() const { return actions.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(contexts.cols()); }

  // Rows in the given order; indices may repeat (bootstrap).
  LoggedBanditFeedback Subset(std::span<const std::size_t> rows) const;
};

// Throws ieoe::Error naming the first offending index when an invariant of
// LoggedBanditFeedback does not hold.
void ValidateFeedback(const LoggedBanditFeedback& fb);

// A policy evaluated at a fixed list of contexts: row i is pi(.|x_i).
class ActionDistribution {
 public:
  static constexpr double kRowSumTolerance = 1e-9;
  static constexpr double kRenormalizeTolerance = 1e-6;

  ActionDistribution() = default;
  // Rows off by more than kRenormalizeTolerance are rejected; smaller
  // deviations are renormalized.
  explicit ActionDistribution(Matrix probs);

  static ActionDistribution Uniform(std::size_t n, int n_actions);

  const Matrix& probs() const { return probs_; }
  std::size_t rows() const { return static_cast<std::size_t>(probs_.rows()); }
  int n_actions() const { return static_cast<int>(probs_.cols()); }
  double operator()(std::size_t i, int a) const { return probs_(i, a); }

  ActionDistribution Subset(std::span<const std::size_t> rows) const;

 private:
  Matrix probs_;
};

struct ImportanceWeights {
  std::vector<double> weights;
  double rho_max = 0.0;

  std::size_t size() const { return weights.size(); }
  ImportanceWeights Subset(std::span<const std::size_t> rows) const;
};

// q_hat(x_i, a) for every logged context and action.
struct RewardPredictionMatrix {
  Matrix values;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  RewardPredictionMatrix Subset(std::span<const std::size_t> rows) const;
  static RewardPredictionMatrix Constant(std::size_t n, int n_actions,
                                         double value);
};

struct LoggedTruePropensities {};
struct EstimatedPropensities {
  ActionDistribution distribution;
};
using PropensitySource =
    std::variant<LoggedTruePropensities, EstimatedPropensities>;

// weights[i] = pi_e(a_i|x_i) / pi_b(a_i|x_i); rho_max is the maximum over
// the logged pairs only.
ImportanceWeights ComputeImportanceWeights(const ActionDistribution& eval_dist,
                                           const LoggedBanditFeedback& fb,
                                           const PropensitySource& source);

// Behavior propensities of the logged actions under `source`.
std::vector<double> LoggedPropensities(const LoggedBanditFeedback& fb,
                                       const PropensitySource& source);

}  // namespace ieoe

#endif  // IEOE_BANDIT_H_
