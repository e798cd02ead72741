#include "ieoe/scores.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ieoe/error.h"

namespace ieoe {
namespace {

std::vector<double> SortedCopy(std::span<const double> z) {
  if (z.empty()) throw Error(ErrorCode::kEmptyInput, "empty sample");
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Index of the first element of the upper tail {z_i >= q}.
std::size_t TailStart(const std::vector<double>& sorted, double alpha) {
  const auto m = static_cast<double>(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Count of samples <= sorted[i], including later ties.
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    if (static_cast<double>(j + 1) / m >= alpha) return i;
    i = j + 1;
  }
  return sorted.size() - 1;
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::span<const double> sample)
    : sorted_(SortedCopy(sample)) {}

double EmpiricalCdf::operator()(double z) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), z);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double AuCdf(std::span<const double> z, double z_max) {
  if (!(z_max > 0.0)) {
    throw Error(ErrorCode::kNonpositiveZmax, "z_max must be positive");
  }
  const std::vector<double> s = SortedCopy(z);
  // z_max - E[min(z, z_max)], exact at both ends of the range.
  double clamped = 0.0;
  for (double v : s) clamped += std::clamp(v, 0.0, z_max);
  return z_max - clamped / static_cast<double>(s.size());
}

double Cvar(std::span<const double> z, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange, "CVaR alpha must be in [0, 1)");
  }
  const std::vector<double> s = SortedCopy(z);
  const std::size_t start = TailStart(s, alpha);
  double sum = 0.0;
  for (std::size_t i = start; i < s.size(); ++i) sum += s[i];
  return sum / static_cast<double>(s.size() - start);
}

double EmpiricalQuantile(std::span<const double> z, double p) {
  const std::vector<double> s = SortedCopy(z);
  return s[TailStart(s, p)];
}

// Summed in sorted order so the result does not depend on record order.
double MeanScore(std::span<const double> z) {
  const std::vector<double> s = SortedCopy(z);
  double sum = 0.0;
  for (double v : s) sum += v;
  return sum / static_cast<double>(s.size());
}

double StdScore(std::span<const double> z) {
  const double mean = MeanScore(z);
  if (std::isinf(mean)) return std::numeric_limits<double>::infinity();
  const std::vector<double> s = SortedCopy(z);
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(s.size()));
}

SummaryScores Summarize(std::span<const double> z, double z_max,
                        double cvar_alpha) {
  return {MeanScore(z), AuCdf(z, z_max), Cvar(z, cvar_alpha), StdScore(z)};
}

}  // namespace ieoe
