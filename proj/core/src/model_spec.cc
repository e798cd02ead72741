#include "ieoe/model_spec.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "ieoe/error.h"

namespace ieoe {
namespace {

const std::set<std::string>& AllowedNames(ModelFamily family) {
  static const std::set<std::string> kLogistic = {"C"};
  static const std::set<std::string> kRidge = {"alpha"};
  static const std::set<std::string> kBoosting = {
      "learning_rate", "max_depth", "min_samples_leaf", "n_estimators"};
  switch (family) {
    case ModelFamily::kLogistic: return kLogistic;
    case ModelFamily::kRidge: return kRidge;
    case ModelFamily::kBoosting: return kBoosting;
  }
  return kRidge;
}

}  // namespace

std::string_view ModelFamilyName(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLogistic: return "logistic";
    case ModelFamily::kRidge: return "ridge";
    case ModelFamily::kBoosting: return "boosting";
  }
  return "unknown";
}

std::optional<ModelFamily> ParseModelFamily(std::string_view name) {
  if (name == "logistic") return ModelFamily::kLogistic;
  if (name == "ridge") return ModelFamily::kRidge;
  if (name == "boosting") return ModelFamily::kBoosting;
  return std::nullopt;
}

double ModelSpec::Get(const std::string& name, double fallback) const {
  auto it = hyperparams.find(name);
  return it == hyperparams.end() ? fallback : it->second;
}

std::string ModelSpec::Digest() const {
  std::string out(ModelFamilyName(family));
  out += '(';
  bool first = true;
  for (const auto& [name, value] : hyperparams) {
    if (!first) out += ' ';
    first = false;
    out += fmt::format("{}={:.6g}", name, value);
  }
  out += ')';
  return out;
}

void ValidateModelSpec(const ModelSpec& spec) {
  const auto& allowed = AllowedNames(spec.family);
  for (const auto& [name, value] : spec.hyperparams) {
    if (!allowed.contains(name)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("hyperparameter '{}' does not apply to {}", name,
                              ModelFamilyName(spec.family)));
    }
    bool ok = std::isfinite(value);
    if (name == "C" || name == "alpha" || name == "learning_rate") {
      ok = ok && value > 0.0;
    } else {
      ok = ok && value >= 1.0 && value == std::floor(value);
    }
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("invalid {} = {}", name, value));
    }
  }
}

bool HyperparamRange::IsSinglePoint() const {
  if (!choices.empty()) {
    return std::set<double>(choices.begin(), choices.end()).size() == 1;
  }
  return lower == upper;
}

void ValidateSpace(const HyperparamSpace& space) {
  for (const auto& [name, range] : space) {
    if (!range.choices.empty()) continue;
    if (!(range.lower <= range.upper)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("range for '{}' has lower > upper", name));
    }
    if (range.log_scale && !(range.lower > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("log-scaled range for '{}' needs lower > 0", name));
    }
  }
}

double SampleHyperparam(const HyperparamRange& range, Rng& rng) {
  if (!range.choices.empty()) {
    return range.choices[UniformIndex(rng, range.choices.size())];
  }
  if (range.integer) {
    const auto lo = static_cast<long long>(std::ceil(range.lower));
    const auto hi = static_cast<long long>(std::floor(range.upper));
    if (!range.log_scale) {
      return static_cast<double>(
          lo + static_cast<long long>(
                   UniformIndex(rng, static_cast<std::size_t>(hi - lo + 1))));
    }
    // Log-uniform over [lo, hi + 1), floored.
    const double u = Uniform01(rng);
    const double v = std::exp(std::log(static_cast<double>(lo)) +
                              u * (std::log(static_cast<double>(hi + 1)) -
                                   std::log(static_cast<double>(lo))));
    return std::clamp(std::floor(v), static_cast<double>(lo),
                      static_cast<double>(hi));
  }
  const double u = Uniform01(rng);
  if (range.log_scale) {
    const double lo = std::log(range.lower);
    const double hi = std::log(range.upper);
    return std::exp(lo + u * (hi - lo));
  }
  return range.lower + u * (range.upper - range.lower);
}

ModelSpec SampleModelSpec(ModelFamily family, const HyperparamSpace& space,
                          Rng& rng) {
  ModelSpec spec;
  spec.family = family;
  for (const auto& [name, range] : space) {
    spec.hyperparams[name] = SampleHyperparam(range, rng);
  }
  spec.seed = rng();
  return spec;
}

HyperparamSpace DefaultSpace(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLogistic:
      return {{"C", {1e-3, 1e3, true, false, {}}}};
    case ModelFamily::kRidge:
      return {{"alpha", {1e-2, 1e2, true, false, {}}}};
    case ModelFamily::kBoosting:
      return {{"learning_rate", {1e-4, 1e-1, true, false, {}}},
              {"max_depth", {2, 10, false, true, {}}},
              {"min_samples_leaf", {5, 20, false, true, {}}}};
  }
  return {};
}

}  // namespace ieoe
