#include "ieoe/io/csv.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ieoe/error.h"

namespace ieoe::io {
namespace {

[[noreturn]] void Schema(const std::string& what, std::size_t row) {
  throw Error(ErrorCode::kSchemaViolation, what, row);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Nonempty lines; `line_no` holds the 1-based line number of each.
std::vector<std::string_view> Lines(std::string_view text,
                                    std::vector<std::size_t>& line_no) {
  std::vector<std::string_view> out;
  std::size_t pos = 0, no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++no;
    std::string_view line = Trim(text.substr(pos, end - pos));
    if (!line.empty()) {
      out.push_back(line);
      line_no.push_back(no);
    }
    pos = end + 1;
  }
  return out;
}

double ParseDouble(std::string_view s, const std::string& column,
                   std::size_t line) {
  s = Trim(s);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    Schema(fmt::format("line {}, column '{}': '{}' is not a number", line,
                       column, s),
           line);
  }
  return v;
}

long long ParseInt(std::string_view s, const std::string& column,
                   std::size_t line) {
  s = Trim(s);
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    Schema(fmt::format("line {}, column '{}': '{}' is not an integer", line,
                       column, s),
           line);
  }
  return v;
}

// Number of leading columns named prefix0, prefix1, ...
int CountIndexed(const std::vector<std::string>& header, const std::string& prefix,
                 std::size_t start = 0) {
  int d = 0;
  while (start + d < header.size() &&
         header[start + d] == fmt::format("{}{}", prefix, d)) {
    ++d;
  }
  return d;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line;  // source line of each row
};

Table ParseTable(std::string_view text) {
  std::vector<std::size_t> numbers;
  auto lines = Lines(text, numbers);
  if (lines.empty()) Schema("file is empty; a header row is required", 0);
  Table t;
  for (auto& h : SplitCsvLine(lines[0])) t.header.emplace_back(Trim(h));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = SplitCsvLine(lines[i]);
    if (fields.size() != t.header.size()) {
      Schema(fmt::format("line {}: expected {} fields, found {}", numbers[i],
                         t.header.size(), fields.size()),
             numbers[i]);
    }
    t.rows.push_back(std::move(fields));
    t.line.push_back(numbers[i]);
  }
  if (t.rows.empty()) Schema("file has a header but no data rows", 0);
  return t;
}

std::string Expect(const std::string& what, const Table& t) {
  std::string got;
  for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
  return fmt::format("header must be {}; found '{}'", what, got);
}

}  // namespace

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string EscapeCsvField(std::string_view field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos ||
               (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

LoggedBanditFeedback ParseFeedbackCsv(std::string_view text,
                                      const FeedbackCsvOptions& options) {
  Table t = ParseTable(text);
  const int d = CountIndexed(t.header, "f");
  const std::size_t rest = t.header.size() - static_cast<std::size_t>(d);
  const std::string want = "f0..f{d-1},action,reward[,propensity]";
  if (d == 0 || rest < 2 || rest > 3 || t.header[d] != "action" ||
      t.header[d + 1] != "reward" ||
      (rest == 3 && t.header[d + 2] != "propensity")) {
    Schema(Expect(want, t), 1);
  }
  const bool has_props = rest == 3;
  if (options.require_propensities && !has_props) {
    throw Error(ErrorCode::kMissingPropensities,
                "the 'propensity' column is required with true propensities");
  }
  const std::size_t n = t.rows.size();
  LoggedBanditFeedback fb;
  fb.contexts.resize(static_cast<Eigen::Index>(n), d);
  fb.actions.resize(n);
  fb.rewards.resize(n);
  if (has_props) fb.propensities.emplace(n);
  int max_action = -1;
  double max_reward = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = t.rows[i];
    const std::size_t line = t.line[i];
    for (int j = 0; j < d; ++j) {
      double x = ParseDouble(row[j], t.header[j], line);
      if (!std::isfinite(x)) {
        Schema(fmt::format("line {}, column '{}': must be finite", line,
                           t.header[j]),
               line);
      }
      fb.contexts(static_cast<Eigen::Index>(i), j) = x;
    }
    long long a = ParseInt(row[d], "action", line);
    if (a < 0 || a > 1'000'000) {
      Schema(fmt::format("line {}, column 'action': {} is not a valid action",
                         line, a),
             line);
    }
    fb.actions[i] = static_cast<int>(a);
    max_action = std::max(max_action, fb.actions[i]);
    double r = ParseDouble(row[d + 1], "reward", line);
    if (!(r >= 0.0) || !std::isfinite(r)) {
      Schema(fmt::format("line {}, column 'reward': {} is negative or not "
                         "finite",
                         line, r),
             line);
    }
    fb.rewards[i] = r;
    max_reward = std::max(max_reward, r);
    if (has_props) {
      double p = ParseDouble(row[d + 2], "propensity", line);
      if (!(p > 0.0 && p <= 1.0)) {
        Schema(fmt::format("line {}, column 'propensity': {} outside (0, 1]",
                           line, p),
               line);
      }
      (*fb.propensities)[i] = p;
    }
  }
  fb.n_actions = options.n_actions.value_or(max_action + 1);
  if (max_action >= fb.n_actions) {
    Schema(fmt::format("column 'action': action {} outside the {} actions",
                       max_action, fb.n_actions),
           0);
  }
  fb.r_max = options.r_max.value_or(std::max(1.0, max_reward));
  if (max_reward > fb.r_max) {
    Schema(fmt::format("column 'reward': {} exceeds r_max {}", max_reward,
                       fb.r_max),
           0);
  }
  ValidateFeedback(fb);
  return fb;
}

LoggedBanditFeedback LoadFeedbackCsv(const std::filesystem::path& path,
                                     const FeedbackCsvOptions& options) {
  return ParseFeedbackCsv(ReadTextFile(path), options);
}

ClassificationDataset ParseClassificationCsv(std::string_view text) {
  Table t = ParseTable(text);
  const int d = CountIndexed(t.header, "f");
  if (d == 0 || t.header.size() != static_cast<std::size_t>(d) + 1 ||
      t.header[d] != "label") {
    Schema(Expect("f0..f{d-1},label", t), 1);
  }
  ClassificationDataset ds;
  const std::size_t n = t.rows.size();
  ds.features.resize(static_cast<Eigen::Index>(n), d);
  ds.labels.resize(n);
  int max_label = -1;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      ds.features(static_cast<Eigen::Index>(i), j) =
          ParseDouble(t.rows[i][j], t.header[j], t.line[i]);
    }
    long long y = ParseInt(t.rows[i][d], "label", t.line[i]);
    if (y < 0 || y > 1'000'000) {
      Schema(fmt::format("line {}, column 'label': {} is not a valid label",
                         t.line[i], y),
             t.line[i]);
    }
    ds.labels[i] = static_cast<int>(y);
    max_label = std::max(max_label, ds.labels[i]);
  }
  ds.n_classes = max_label + 1;
  ValidateClassificationDataset(ds);
  return ds;
}

ClassificationDataset LoadClassificationCsv(const std::filesystem::path& path) {
  return ParseClassificationCsv(ReadTextFile(path));
}

ActionDistribution PolicyTable::Lookup(const Matrix& contexts) const {
  if (contexts.cols() != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("policy table has {} features, contexts have {}",
                            dim, contexts.cols()));
  }
  Matrix probs(contexts.rows(), n_actions);
  std::vector<double> key(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < contexts.rows(); ++i) {
    for (int j = 0; j < dim; ++j) key[j] = contexts(i, j);
    auto it = rows.find(key);
    if (it == rows.end()) {
      Schema(fmt::format("no policy row matches context {}", i),
             static_cast<std::size_t>(i));
    }
    for (int a = 0; a < n_actions; ++a) probs(i, a) = it->second[a];
  }
  return ActionDistribution(std::move(probs));
}

PolicyTable ParsePolicyCsv(std::string_view text) {
  Table t = ParseTable(text);
  PolicyTable pt;
  pt.dim = CountIndexed(t.header, "f");
  pt.n_actions = CountIndexed(t.header, "p", static_cast<std::size_t>(pt.dim));
  if (pt.dim == 0 || pt.n_actions == 0 ||
      t.header.size() != static_cast<std::size_t>(pt.dim + pt.n_actions)) {
    Schema(Expect("f0..f{d-1},p0..p{|A|-1}", t), 1);
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::vector<double> key(pt.dim), p(pt.n_actions);
    for (int j = 0; j < pt.dim; ++j) {
      key[j] = ParseDouble(t.rows[i][j], t.header[j], t.line[i]);
    }
    double sum = 0.0;
    for (int a = 0; a < pt.n_actions; ++a) {
      p[a] = ParseDouble(t.rows[i][pt.dim + a], t.header[pt.dim + a], t.line[i]);
      if (!(p[a] >= 0.0 && p[a] <= 1.0)) {
        Schema(fmt::format("line {}, column '{}': {} outside [0, 1]",
                           t.line[i], t.header[pt.dim + a], p[a]),
               t.line[i]);
      }
      sum += p[a];
    }
    if (std::abs(sum - 1.0) > ActionDistribution::kRenormalizeTolerance) {
      Schema(fmt::format("line {}: probabilities sum to {}", t.line[i], sum),
             t.line[i]);
    }
    auto [it, inserted] = pt.rows.emplace(std::move(key), p);
    if (!inserted && it->second != p) {
      Schema(fmt::format("line {}: context repeated with a different "
                         "distribution",
                         t.line[i]),
             t.line[i]);
    }
  }
  return pt;
}

PolicyTable LoadPolicyCsv(const std::filesystem::path& path) {
  return ParsePolicyCsv(ReadTextFile(path));
}

std::string FormatSquaredErrorsCsv(const ResultSet& results) {
  std::string out =
      "estimator,seed,policy_id,theta_digest,squared_error,flagged\n";
  for (const auto& r : results.records) {
    out += fmt::format("{},{},{},{},{},{}\n", EscapeCsvField(r.estimator),
                       r.seed, EscapeCsvField(r.policy_id),
                       EscapeCsvField(r.theta_digest), r.squared_error,
                       r.flagged ? 1 : 0);
  }
  return out;
}

ResultSet ParseSquaredErrorsCsv(std::string_view text) {
  Table t = ParseTable(text);
  const std::vector<std::string> want = {"estimator",    "seed",
                                         "policy_id",    "theta_digest",
                                         "squared_error", "flagged"};
  if (t.header != want) {
    Schema(Expect("estimator,seed,policy_id,theta_digest,squared_error,flagged",
                  t),
           1);
  }
  ResultSet rs;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    SeRecord r;
    r.estimator = row[0];
    long long seed = ParseInt(row[1], "seed", t.line[i]);
    if (seed < 0) Schema(fmt::format("line {}: negative seed", t.line[i]), t.line[i]);
    r.seed = static_cast<std::uint64_t>(seed);
    r.policy_id = row[2];
    r.theta_digest = row[3];
    r.squared_error = ParseDouble(row[4], "squared_error", t.line[i]);
    if (!(r.squared_error >= 0.0)) {
      Schema(fmt::format("line {}: squared_error must be nonnegative",
                         t.line[i]),
             t.line[i]);
    }
    long long f = ParseInt(row[5], "flagged", t.line[i]);
    if (f != 0 && f != 1) {
      Schema(fmt::format("line {}: flagged must be 0 or 1", t.line[i]),
             t.line[i]);
    }
    r.flagged = f == 1;
    if (std::find(rs.estimators.begin(), rs.estimators.end(), r.estimator) ==
        rs.estimators.end()) {
      rs.estimators.push_back(r.estimator);
    }
    rs.records.push_back(std::move(r));
  }
  return rs;
}

ResultSet LoadSquaredErrorsCsv(const std::filesystem::path& path) {
  return ParseSquaredErrorsCsv(ReadTextFile(path));
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("failed writing '{}'", path.string()));
  }
}

}  // namespace ieoe::io
