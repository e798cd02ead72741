#ifndef IEOE_SCORES_H_
#define IEOE_SCORES_H_

#include <span>
#include <vector>

namespace ieoe {

// Right-continuous empirical CDF F(z) = #{z_i <= z} / m.
class EmpiricalCdf {
 public:
  // Throws kEmptyInput for an empty sample.
  explicit EmpiricalCdf(std::span<const double> sample);

  double operator()(double z) const;
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// Exact integral of the empirical CDF over [0, z_max]. Each sample
// contributes (z_max - clamp(z_i, 0, z_max)) / m.
double AuCdf(std::span<const double> z, double z_max);

// E[Z | Z >= q] with q the smallest sample whose empirical CDF reaches
// alpha. alpha must lie in [0, 1).
double Cvar(std::span<const double> z, double alpha);

// Population standard deviation (divides by m).
double StdScore(std::span<const double> z);

double MeanScore(std::span<const double> z);

// Smallest sample value z with F(z) >= p.
double EmpiricalQuantile(std::span<const double> z, double p);

struct SummaryScores {
  double mean = 0.0;
  double au_cdf = 0.0;
  double cvar = 0.0;
  double std = 0.0;
};

SummaryScores Summarize(std::span<const double> z, double z_max,
                        double cvar_alpha);

}  // namespace ieoe

#endif  // IEOE_SCORES_H_
