#ifndef IEOE_BOOSTING_H_
#define IEOE_BOOSTING_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ieoe {

struct BoostingParams {
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_leaf = 5;
  int n_estimators = 100;
  int max_bins = 32;
};

enum class BoostingLoss { kSquared, kLogistic };

// Gradient-boosted regression trees on quantile-binned features, grown
// level-wise with second-order (Newton) leaf values. Deterministic: no row
// or feature subsampling.
class BoostedTrees {
 public:
  static BoostedTrees Fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          BoostingLoss loss, const BoostingParams& params);

  // Additive score before the link function.
  double PredictRaw(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  // Identity link for squared loss, sigmoid for logistic loss.
  double Predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  std::size_t num_trees() const { return roots_.size(); }
  // Flattened leaf values and thresholds, for determinism checks.
  std::vector<double> Parameters() const;

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  BoostingLoss loss_ = BoostingLoss::kSquared;
  double base_score_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<int> roots_;
};

}  // namespace ieoe

#endif  // IEOE_BOOSTING_H_
