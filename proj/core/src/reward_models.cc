#include "ieoe/reward_models.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "ieoe/boosting.h"
#include "ieoe/error.h"
#include "ieoe/linear_models.h"
#include "ieoe/log.h"

namespace ieoe {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

namespace {

constexpr double kLogLossClip = 1e-15;

BoostingParams BoostingParamsFrom(const ModelSpec& spec) {
  BoostingParams p;
  p.learning_rate = spec.Get("learning_rate", p.learning_rate);
  p.max_depth = static_cast<int>(spec.Get("max_depth", p.max_depth));
  p.min_samples_leaf =
      static_cast<int>(spec.Get("min_samples_leaf", p.min_samples_leaf));
  p.n_estimators = static_cast<int>(spec.Get("n_estimators", p.n_estimators));
  return p;
}

MatrixXd RewardDesign(const LoggedBanditFeedback& fb,
                      std::span<const std::size_t> rows) {
  const Index d = fb.contexts.cols();
  MatrixXd x = MatrixXd::Zero(static_cast<Index>(rows.size()), d + fb.n_actions);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Index>(rows[i]);
    x.row(static_cast<Index>(i)).head(d) = fb.contexts.row(r);
    x(static_cast<Index>(i), d + fb.actions[rows[i]]) = 1.0;
  }
  return x;
}

std::vector<std::size_t> Shuffled(std::size_t n, std::uint64_t seed,
                                  Stream stream) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = MakeRng(seed, stream);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[UniformIndex(rng, i)]);
  }
  return perm;
}

double LogLoss(double p, double y) {
  p = std::clamp(p, kLogLossClip, 1.0 - kLogLossClip);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

VectorXd SoftmaxOf(const VectorXd& logits) {
  VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

}  // namespace

// ---------------------------------------------------------------------------
// Reward models

class FittedRewardModel::Impl {
 public:
  virtual ~Impl() = default;
  virtual double Predict(const Eigen::Ref<const RowVectorXd>& context,
                         int action) const = 0;
  virtual std::vector<double> Parameters() const = 0;
  int dim = 0;
  int n_actions = 0;
};

namespace {

class LinearRewardImpl final : public FittedRewardModel::Impl {
 public:
  LinearRewardImpl(LinearModel model, bool logistic, double scale)
      : model_(std::move(model)), logistic_(logistic), scale_(scale) {}

  double Predict(const Eigen::Ref<const RowVectorXd>& context,
                 int action) const override {
    const double z = context.dot(model_.coef.head(dim).transpose()) +
                     model_.coef(dim + action) + model_.intercept;
    return logistic_ ? scale_ * Sigmoid(z) : z;
  }

  std::vector<double> Parameters() const override {
    std::vector<double> out(model_.coef.data(),
                            model_.coef.data() + model_.coef.size());
    out.push_back(model_.intercept);
    return out;
  }

 private:
  LinearModel model_;
  bool logistic_;
  double scale_;
};

class BoostingRewardImpl final : public FittedRewardModel::Impl {
 public:
  BoostingRewardImpl(BoostedTrees trees, double scale)
      : trees_(std::move(trees)), scale_(scale) {}

  double Predict(const Eigen::Ref<const RowVectorXd>& context,
                 int action) const override {
    RowVectorXd x = RowVectorXd::Zero(dim + n_actions);
    x.head(dim) = context;
    x(dim + action) = 1.0;
    return scale_ * trees_.Predict(x);
  }

  std::vector<double> Parameters() const override {
    return trees_.Parameters();
  }

 private:
  BoostedTrees trees_;
  double scale_;
};

}  // namespace

FittedRewardModel::FittedRewardModel(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

double FittedRewardModel::Predict(const Eigen::Ref<const RowVectorXd>& context,
                                  int action) const {
  return impl_->Predict(context, action);
}

int FittedRewardModel::dim() const { return impl_->dim; }
int FittedRewardModel::n_actions() const { return impl_->n_actions; }
std::vector<double> FittedRewardModel::Parameters() const {
  return impl_->Parameters();
}

bool HasBinaryRewards(const LoggedBanditFeedback& fb) {
  return std::all_of(fb.rewards.begin(), fb.rewards.end(),
                     [](double r) { return r == 0.0 || r == 1.0; });
}

FittedRewardModel FitRewardModel(const ModelSpec& spec,
                                 const LoggedBanditFeedback& fb,
                                 std::span<const std::size_t> rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptySubset, "reward model needs at least one row");
  }
  ValidateModelSpec(spec);
  const MatrixXd x = RewardDesign(fb, rows);
  VectorXd y(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y(static_cast<Index>(i)) = fb.rewards[rows[i]];
  }

  std::shared_ptr<FittedRewardModel::Impl> impl;
  switch (spec.family) {
    case ModelFamily::kRidge:
      impl = std::make_shared<LinearRewardImpl>(
          FitRidge(x, y, spec.Get("alpha", 1.0)), false, 1.0);
      break;
    case ModelFamily::kLogistic:
      impl = std::make_shared<LinearRewardImpl>(
          FitLogistic(x, y / fb.r_max, spec.Get("C", 1.0)), true, fb.r_max);
      break;
    case ModelFamily::kBoosting:
      if (HasBinaryRewards(fb)) {
        impl = std::make_shared<BoostingRewardImpl>(
            BoostedTrees::Fit(x, y, BoostingLoss::kLogistic,
                              BoostingParamsFrom(spec)),
            1.0);
      } else {
        impl = std::make_shared<BoostingRewardImpl>(
            BoostedTrees::Fit(x, y, BoostingLoss::kSquared,
                              BoostingParamsFrom(spec)),
            1.0);
      }
      break;
  }
  impl->dim = static_cast<int>(fb.contexts.cols());
  impl->n_actions = fb.n_actions;
  return FittedRewardModel(std::move(impl));
}

RewardPredictionMatrix PredictRewardMatrix(const FittedRewardModel& model,
                                           const LoggedBanditFeedback& fb,
                                           std::span<const std::size_t> rows) {
  if (model.dim() != static_cast<int>(fb.contexts.cols()) ||
      model.n_actions() != fb.n_actions) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("model trained for d={}, |A|={}; data has d={}, "
                            "|A|={}",
                            model.dim(), model.n_actions(), fb.contexts.cols(),
                            fb.n_actions));
  }
  RewardPredictionMatrix out;
  out.values.resize(static_cast<Index>(rows.size()), fb.n_actions);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto ctx = fb.contexts.row(static_cast<Index>(rows[i]));
    for (int a = 0; a < fb.n_actions; ++a) {
      out.values(static_cast<Index>(i), a) = model.Predict(ctx, a);
    }
  }
  return out;
}

std::vector<FoldPrediction> CrossFitRewardMatrices(
    const ModelSpec& spec, const LoggedBanditFeedback& fb, int k,
    std::uint64_t seed) {
  const std::size_t n = fb.size();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::kTooManyFolds,
                fmt::format("K={} exceeds n={}", k, n));
  }
  std::vector<FoldPrediction> folds;
  if (k == 1) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    const FittedRewardModel model = FitRewardModel(spec, fb, all);
    folds.push_back({all, PredictRewardMatrix(model, fb, all)});
    return folds;
  }
  const std::vector<std::size_t> perm = Shuffled(n, seed, Stream::kSplit);
  const std::size_t fold_size = n / static_cast<std::size_t>(k);
  for (int f = 0; f < k; ++f) {
    const auto begin = static_cast<std::size_t>(f) * fold_size;
    std::vector<std::size_t> rows(perm.begin() + begin,
                                  perm.begin() + begin + fold_size);
    std::vector<std::size_t> train;
    train.reserve(n - fold_size);
    train.insert(train.end(), perm.begin(), perm.begin() + begin);
    train.insert(train.end(), perm.begin() + begin + fold_size, perm.end());
    const FittedRewardModel model = FitRewardModel(spec, fb, train);
    RewardPredictionMatrix q = PredictRewardMatrix(model, fb, rows);
    folds.push_back({std::move(rows), std::move(q)});
  }
  return folds;
}

// ---------------------------------------------------------------------------
// Behavior policy models

class FittedPolicyModel::Impl {
 public:
  virtual ~Impl() = default;
  // Uncalibrated class probabilities.
  virtual VectorXd Probs(const Eigen::Ref<const RowVectorXd>& x) const = 0;
  int n_actions = 0;
  double temperature = 1.0;
};

namespace {

class SoftmaxPolicyImpl final : public FittedPolicyModel::Impl {
 public:
  explicit SoftmaxPolicyImpl(SoftmaxModel m) : model_(std::move(m)) {}
  VectorXd Probs(const Eigen::Ref<const RowVectorXd>& x) const override {
    return SoftmaxOf(model_.Logits(x));
  }

 private:
  SoftmaxModel model_;
};

class OneVsRestPolicyImpl final : public FittedPolicyModel::Impl {
 public:
  explicit OneVsRestPolicyImpl(std::vector<BoostedTrees> trees)
      : trees_(std::move(trees)) {}
  VectorXd Probs(const Eigen::Ref<const RowVectorXd>& x) const override {
    VectorXd p(static_cast<Index>(trees_.size()));
    for (std::size_t a = 0; a < trees_.size(); ++a) {
      p(static_cast<Index>(a)) = std::max(trees_[a].Predict(x), 1e-300);
    }
    return p / p.sum();
  }

 private:
  std::vector<BoostedTrees> trees_;
};

class DegeneratePolicyImpl final : public FittedPolicyModel::Impl {
 public:
  explicit DegeneratePolicyImpl(int action) : action_(action) {}
  VectorXd Probs(const Eigen::Ref<const RowVectorXd>&) const override {
    VectorXd p = VectorXd::Constant(n_actions, kSingleClassEpsilon / n_actions);
    p(action_) += 1.0 - kSingleClassEpsilon;
    return p;
  }

 private:
  int action_;
};

std::shared_ptr<FittedPolicyModel::Impl> FitPolicyImpl(
    const ModelSpec& spec, const LoggedBanditFeedback& fb,
    std::span<const std::size_t> rows) {
  MatrixXd x(static_cast<Index>(rows.size()), fb.contexts.cols());
  std::vector<int> labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<Index>(i)) = fb.contexts.row(static_cast<Index>(rows[i]));
    labels[i] = fb.actions[rows[i]];
  }
  std::shared_ptr<FittedPolicyModel::Impl> impl;
  switch (spec.family) {
    case ModelFamily::kLogistic:
      impl = std::make_shared<SoftmaxPolicyImpl>(
          FitSoftmax(x, labels, fb.n_actions, spec.Get("C", 1.0)));
      break;
    case ModelFamily::kBoosting: {
      std::vector<BoostedTrees> trees;
      const BoostingParams params = BoostingParamsFrom(spec);
      for (int a = 0; a < fb.n_actions; ++a) {
        VectorXd y(static_cast<Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
          y(static_cast<Index>(i)) = labels[i] == a ? 1.0 : 0.0;
        }
        trees.push_back(
            BoostedTrees::Fit(x, y, BoostingLoss::kLogistic, params));
      }
      impl = std::make_shared<OneVsRestPolicyImpl>(std::move(trees));
      break;
    }
    case ModelFamily::kRidge:
      throw Error(ErrorCode::kInvalidArgument,
                  "ridge cannot model a behavior policy");
  }
  impl->n_actions = fb.n_actions;
  return impl;
}

VectorXd Calibrate(const VectorXd& probs, double temperature) {
  if (temperature == 1.0) return probs;
  VectorXd logits = probs.array().max(1e-300).log() / temperature;
  return SoftmaxOf(logits);
}

}  // namespace

FittedPolicyModel::FittedPolicyModel(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

VectorXd FittedPolicyModel::PredictRow(
    const Eigen::Ref<const RowVectorXd>& context) const {
  VectorXd p = Calibrate(impl_->Probs(context), impl_->temperature);
  return p / p.sum();
}

ActionDistribution FittedPolicyModel::PredictDist(const Matrix& contexts) const {
  Matrix probs(contexts.rows(), impl_->n_actions);
  for (Index i = 0; i < contexts.rows(); ++i) {
    probs.row(i) = PredictRow(contexts.row(i)).transpose();
  }
  return ActionDistribution(std::move(probs));
}

double FittedPolicyModel::temperature() const { return impl_->temperature; }
int FittedPolicyModel::n_actions() const { return impl_->n_actions; }

FittedPolicyModel FitBehaviorPolicy(const ModelSpec& spec,
                                    const LoggedBanditFeedback& fb,
                                    const Calibration& calibration,
                                    std::uint64_t seed) {
  const std::size_t n = fb.size();
  if (n == 0) throw Error(ErrorCode::kEmptySubset, "no rows to fit");
  ValidateModelSpec(spec);
  if (n < 2 * static_cast<std::size_t>(fb.n_actions)) {
    Warn(fmt::format("behavior policy fit on n={} rows for {} actions", n,
                     fb.n_actions));
  }
  const bool single_class =
      std::all_of(fb.actions.begin(), fb.actions.end(),
                  [&](int a) { return a == fb.actions.front(); });
  if (single_class) {
    Warn(fmt::format("only action {} observed; emitting a degenerate policy",
                     fb.actions.front()));
    auto impl = std::make_shared<DegeneratePolicyImpl>(fb.actions.front());
    impl->n_actions = fb.n_actions;
    return FittedPolicyModel(std::move(impl));
  }

  if (std::holds_alternative<NoCalibration>(calibration)) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return FittedPolicyModel(FitPolicyImpl(spec, fb, all));
  }

  const double frac = std::get<TemperatureScaling>(calibration).holdout_fraction;
  if (!(frac > 0.0 && frac < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "holdout_fraction must be in (0, 1)");
  }
  const std::vector<std::size_t> perm = Shuffled(n, seed, Stream::kSplit);
  auto n_holdout = static_cast<std::size_t>(std::llround(frac * n));
  n_holdout = std::clamp<std::size_t>(n_holdout, 1, n - 1);
  std::vector<std::size_t> holdout(perm.begin(), perm.begin() + n_holdout);
  std::vector<std::size_t> train(perm.begin() + n_holdout, perm.end());
  auto impl = FitPolicyImpl(spec, fb, train);

  std::vector<VectorXd> log_probs;
  log_probs.reserve(holdout.size());
  for (std::size_t r : holdout) {
    log_probs.push_back(
        impl->Probs(fb.contexts.row(static_cast<Index>(r))).array().max(1e-300).log());
  }
  auto nll = [&](double log_t) {
    const double inv_t = std::exp(-log_t);
    double total = 0.0;
    for (std::size_t i = 0; i < holdout.size(); ++i) {
      const VectorXd z = log_probs[i] * inv_t;
      const double zmax = z.maxCoeff();
      const double lse = zmax + std::log((z.array() - zmax).exp().sum());
      total += lse - z(fb.actions[holdout[i]]);
    }
    return total;
  };
  const auto [log_t, value] = boost::math::tools::brent_find_minima(
      nll, std::log(1e-2), std::log(1e2), 40);
  (void)value;
  impl->temperature = std::exp(log_t);
  return FittedPolicyModel(std::move(impl));
}

std::size_t FloorPropensities(Matrix& probs, double floor) {
  std::size_t raised = 0;
  const Index k = probs.cols();
  if (floor * static_cast<double>(k) >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "propensity floor too large");
  }
  std::vector<bool> pinned(static_cast<std::size_t>(k));
  for (Index i = 0; i < probs.rows(); ++i) {
    std::fill(pinned.begin(), pinned.end(), false);
    Index n_pinned = 0;
    for (Index a = 0; a < k; ++a) {
      if (probs(i, a) < floor) {
        pinned[a] = true;
        ++n_pinned;
      }
    }
    if (n_pinned == 0) continue;
    raised += static_cast<std::size_t>(n_pinned);
    // Rescale the free entries to the remaining mass; repeat while the
    // rescaling pushes a free entry under the floor.
    for (bool again = true; again;) {
      again = false;
      double free_sum = 0.0;
      for (Index a = 0; a < k; ++a) {
        if (!pinned[a]) free_sum += probs(i, a);
      }
      const double scale =
          (1.0 - floor * static_cast<double>(n_pinned)) / free_sum;
      for (Index a = 0; a < k; ++a) {
        if (!pinned[a] && probs(i, a) * scale < floor) {
          pinned[a] = true;
          ++n_pinned;
          again = true;
        }
      }
      if (again) continue;
      for (Index a = 0; a < k; ++a) {
        probs(i, a) = pinned[a] ? floor : probs(i, a) * scale;
      }
    }
  }
  return raised;
}

// ---------------------------------------------------------------------------
// Random search

namespace {

double HoldoutLoss(const ModelSpec& spec, const LoggedBanditFeedback& fb,
                   std::span<const std::size_t> train,
                   std::span<const std::size_t> test, SearchTarget target) {
  double total = 0.0;
  if (target == SearchTarget::kBehaviorPolicy) {
    const FittedPolicyModel model =
        FitBehaviorPolicy(spec, fb.Subset(train), NoCalibration{}, spec.seed);
    for (std::size_t r : test) {
      const VectorXd p = model.PredictRow(fb.contexts.row(static_cast<Index>(r)));
      total += -std::log(std::max(p(fb.actions[r]), kLogLossClip));
    }
    return total;
  }
  const FittedRewardModel model = FitRewardModel(spec, fb, train);
  const bool log_loss =
      spec.family == ModelFamily::kLogistic ||
      (spec.family == ModelFamily::kBoosting && HasBinaryRewards(fb));
  for (std::size_t r : test) {
    const double pred =
        model.Predict(fb.contexts.row(static_cast<Index>(r)), fb.actions[r]);
    const double y = fb.rewards[r];
    if (log_loss) {
      total += LogLoss(pred / fb.r_max, y / fb.r_max);
    } else {
      total += (pred - y) * (pred - y);
    }
  }
  return total;
}

}  // namespace

ModelSpec RandomSearch(const HyperparamSpace& space, ModelFamily family,
                       const LoggedBanditFeedback& fb, int n_iter,
                       std::uint64_t seed, SearchTarget target) {
  if (space.empty()) {
    throw Error(ErrorCode::kEmptySpace, "hyperparameter space is empty");
  }
  if (n_iter < 1) throw Error(ErrorCode::kInvalidArgument, "n_iter must be >= 1");
  ValidateSpace(space);

  Rng rng = MakeRng(seed, Stream::kHyperparam);
  std::vector<ModelSpec> candidates;
  for (int i = 0; i < n_iter; ++i) {
    candidates.push_back(SampleModelSpec(family, space, rng));
  }
  const bool single_point =
      std::all_of(space.begin(), space.end(),
                  [](const auto& kv) { return kv.second.IsSinglePoint(); });
  if (candidates.size() == 1 || single_point || fb.size() < 4) {
    return candidates.front();
  }

  const std::vector<std::size_t> perm = Shuffled(fb.size(), seed, Stream::kSplit);
  const std::size_t half = fb.size() / 2;
  const std::span<const std::size_t> first(perm.data(), half);
  const std::span<const std::size_t> second(perm.data() + half,
                                            perm.size() - half);
  std::size_t best = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double loss;
    try {
      loss = HoldoutLoss(candidates[c], fb, first, second, target) +
             HoldoutLoss(candidates[c], fb, second, first, target);
    } catch (const Error& e) {
      Warn(fmt::format("random search candidate {} failed: {}",
                       candidates[c].Digest(), e.what()));
      continue;
    }
    if (loss < best_loss) {
      best_loss = loss;
      best = c;
    }
  }
  return candidates[best];
}

}  // namespace ieoe
