#include "ieoe/boosting.h"

#include <algorithm>
#include <cmath>

#include "ieoe/error.h"
#include "ieoe/linear_models.h"

namespace ieoe {
namespace {

using Eigen::Index;

constexpr double kL2Reg = 1e-3;
constexpr double kMinHessian = 1e-3;
constexpr double kMinGain = 1e-12;

struct BinnedFeature {
  std::vector<double> edges;  // bin(x) = #edges < x
  std::vector<std::uint8_t> codes;
};

BinnedFeature BinFeature(const Eigen::VectorXd& col, int max_bins) {
  std::vector<double> sorted(col.data(), col.data() + col.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> uniq = sorted;
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  BinnedFeature out;
  if (static_cast<int>(uniq.size()) <= max_bins) {
    out.edges.assign(uniq.begin(), uniq.end() - 1);
  } else {
    const std::size_t n = sorted.size();
    for (int b = 1; b < max_bins; ++b) {
      const double q = sorted[(n * static_cast<std::size_t>(b)) /
                              static_cast<std::size_t>(max_bins)];
      if (q < uniq.back() && (out.edges.empty() || q > out.edges.back())) {
        out.edges.push_back(q);
      }
    }
  }
  out.codes.resize(static_cast<std::size_t>(col.size()));
  for (Index i = 0; i < col.size(); ++i) {
    out.codes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
        std::lower_bound(out.edges.begin(), out.edges.end(), col(i)) -
        out.edges.begin());
  }
  return out;
}

struct BinStats {
  double g = 0.0;
  double h = 0.0;
  int count = 0;
};

double Gain(double g, double h) { return g * g / (h + kL2Reg); }

}  // namespace

BoostedTrees BoostedTrees::Fit(const Eigen::MatrixXd& x,
                               const Eigen::VectorXd& y, BoostingLoss loss,
                               const BoostingParams& params) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (n == 0) throw Error(ErrorCode::kEmptySubset, "no rows to fit");
  if (!(params.learning_rate > 0.0) || params.max_depth < 1 ||
      params.min_samples_leaf < 1 || params.n_estimators < 1 ||
      params.max_bins < 2 || params.max_bins > 256) {
    throw Error(ErrorCode::kInvalidArgument, "invalid boosting parameters");
  }

  std::vector<BinnedFeature> bins;
  bins.reserve(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) bins.push_back(BinFeature(x.col(j), params.max_bins));

  BoostedTrees model;
  model.loss_ = loss;
  const double y_mean = y.mean();
  if (loss == BoostingLoss::kSquared) {
    model.base_score_ = y_mean;
  } else {
    const double p = std::clamp(y_mean, 1e-6, 1.0 - 1e-6);
    model.base_score_ = std::log(p / (1.0 - p));
  }

  const auto un = static_cast<std::size_t>(n);
  std::vector<double> score(un, model.base_score_);
  std::vector<double> grad(un), hess(un);
  std::vector<BinStats> hist;

  struct Pending {
    int node;
    int depth;
    std::vector<std::size_t> rows;
  };

  for (int t = 0; t < params.n_estimators; ++t) {
    for (std::size_t i = 0; i < un; ++i) {
      const double yi = y(static_cast<Index>(i));
      if (loss == BoostingLoss::kSquared) {
        grad[i] = score[i] - yi;
        hess[i] = 1.0;
      } else {
        const double p = Sigmoid(score[i]);
        grad[i] = p - yi;
        hess[i] = std::max(p * (1.0 - p), 1e-12);
      }
    }

    const int root = static_cast<int>(model.nodes_.size());
    model.nodes_.push_back({});
    model.roots_.push_back(root);
    std::vector<Pending> level;
    level.push_back({root, 0, {}});
    level.back().rows.resize(un);
    for (std::size_t i = 0; i < un; ++i) level.back().rows[i] = i;

    while (!level.empty()) {
      std::vector<Pending> next_level;
      for (Pending& item : level) {
        double g_tot = 0.0, h_tot = 0.0;
        for (std::size_t r : item.rows) {
          g_tot += grad[r];
          h_tot += hess[r];
        }
        const int count = static_cast<int>(item.rows.size());
        int best_feature = -1;
        int best_bin = -1;
        double best_gain = kMinGain;
        if (item.depth < params.max_depth &&
            count >= 2 * params.min_samples_leaf) {
          const double parent = Gain(g_tot, h_tot);
          for (Index j = 0; j < d; ++j) {
            const BinnedFeature& bf = bins[static_cast<std::size_t>(j)];
            const int n_bins = static_cast<int>(bf.edges.size()) + 1;
            if (n_bins < 2) continue;
            hist.assign(static_cast<std::size_t>(n_bins), {});
            for (std::size_t r : item.rows) {
              BinStats& s = hist[bf.codes[r]];
              s.g += grad[r];
              s.h += hess[r];
              ++s.count;
            }
            double gl = 0.0, hl = 0.0;
            int cl = 0;
            for (int b = 0; b + 1 < n_bins; ++b) {
              gl += hist[static_cast<std::size_t>(b)].g;
              hl += hist[static_cast<std::size_t>(b)].h;
              cl += hist[static_cast<std::size_t>(b)].count;
              const int cr = count - cl;
              if (cl < params.min_samples_leaf) continue;
              if (cr < params.min_samples_leaf) break;
              const double hr = h_tot - hl;
              if (hl < kMinHessian || hr < kMinHessian) continue;
              const double gain = Gain(gl, hl) + Gain(g_tot - gl, hr) - parent;
              if (gain > best_gain) {
                best_gain = gain;
                best_feature = static_cast<int>(j);
                best_bin = b;
              }
            }
          }
        }
        if (best_feature < 0) {
          const double value = -g_tot / (h_tot + kL2Reg) * params.learning_rate;
          model.nodes_[static_cast<std::size_t>(item.node)].value = value;
          for (std::size_t r : item.rows) score[r] += value;
          continue;
        }
        const BinnedFeature& bf = bins[static_cast<std::size_t>(best_feature)];
        Pending left{static_cast<int>(model.nodes_.size()), item.depth + 1, {}};
        model.nodes_.push_back({});
        Pending right{static_cast<int>(model.nodes_.size()), item.depth + 1, {}};
        model.nodes_.push_back({});
        for (std::size_t r : item.rows) {
          (bf.codes[r] <= best_bin ? left.rows : right.rows).push_back(r);
        }
        Node& node = model.nodes_[static_cast<std::size_t>(item.node)];
        node.feature = best_feature;
        node.threshold = bf.edges[static_cast<std::size_t>(best_bin)];
        node.left = left.node;
        node.right = right.node;
        next_level.push_back(std::move(left));
        next_level.push_back(std::move(right));
      }
      level = std::move(next_level);
    }
  }
  return model;
}

double BoostedTrees::PredictRaw(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  double s = base_score_;
  for (int root : roots_) {
    int idx = root;
    while (nodes_[static_cast<std::size_t>(idx)].feature >= 0) {
      const Node& node = nodes_[static_cast<std::size_t>(idx)];
      idx = x(node.feature) <= node.threshold ? node.left : node.right;
    }
    s += nodes_[static_cast<std::size_t>(idx)].value;
  }
  return s;
}

double BoostedTrees::Predict(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const double raw = PredictRaw(x);
  return loss_ == BoostingLoss::kLogistic ? Sigmoid(raw) : raw;
}

std::vector<double> BoostedTrees::Parameters() const {
  std::vector<double> out{base_score_};
  for (const Node& node : nodes_) {
    out.push_back(static_cast<double>(node.feature));
    out.push_back(node.threshold);
    out.push_back(node.value);
  }
  return out;
}

}  // namespace ieoe
