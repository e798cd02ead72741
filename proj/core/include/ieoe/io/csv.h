#ifndef IEOE_IO_CSV_H_
#define IEOE_IO_CSV_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ieoe/bandit.h"
#include "ieoe/datagen.h"
#include "ieoe/evaluator.h"

namespace ieoe::io {

// Splits one CSV record. Fields may be double-quoted ("" escapes a quote).
std::vector<std::string> SplitCsvLine(std::string_view line);
// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string EscapeCsvField(std::string_view field);

struct FeedbackCsvOptions {
  bool require_propensities = false;
  // Inferred as max(action) + 1 when unset.
  std::optional<int> n_actions;
  // Inferred as max(1, max reward) when unset.
  std::optional<double> r_max;
};

// Header f0..f{d-1},action,reward[,propensity]. Throws kSchemaViolation
// naming the column and row, or kMissingPropensities.
LoggedBanditFeedback ParseFeedbackCsv(std::string_view text,
                                      const FeedbackCsvOptions& options = {});
LoggedBanditFeedback LoadFeedbackCsv(const std::filesystem::path& path,
                                     const FeedbackCsvOptions& options = {});

// Header f0..f{d-1},label.
ClassificationDataset ParseClassificationCsv(std::string_view text);
ClassificationDataset LoadClassificationCsv(const std::filesystem::path& path);

// A policy's action distribution keyed by the exact feature tuple of each
// context. Header f0..f{d-1},p0..p{|A|-1}.
struct PolicyTable {
  int dim = 0;
  int n_actions = 0;
  std::map<std::vector<double>, std::vector<double>> rows;

  // Distribution at every context row; throws kSchemaViolation naming the
  // first context with no entry.
  ActionDistribution Lookup(const Matrix& contexts) const;
};

PolicyTable ParsePolicyCsv(std::string_view text);
PolicyTable LoadPolicyCsv(const std::filesystem::path& path);

// squared_errors.csv: estimator,seed,policy_id,theta_digest,squared_error,
// flagged. Numbers use the shortest representation that round-trips.
std::string FormatSquaredErrorsCsv(const ResultSet& results);
ResultSet ParseSquaredErrorsCsv(std::string_view text);
ResultSet LoadSquaredErrorsCsv(const std::filesystem::path& path);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace ieoe::io

#endif  // IEOE_IO_CSV_H_
