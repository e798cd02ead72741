#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "ieoe/error.h"
#include "ieoe/io/config.h"
#include "ieoe/io/csv.h"
#include "ieoe/io/experiment.h"
#include "ieoe/io/export.h"
#include "ieoe/io/plot.h"

namespace ieoe::io {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("ieoe_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

template <typename F>
std::string ExpectCode(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    return e.what();
  }
  return {};
}

ResultSet TwoEstimators(std::vector<double> a, std::vector<double> b) {
  ResultSet rs;
  rs.estimators = {"a", "b"};
  for (std::size_t i = 0; i < a.size(); ++i) {
    rs.records.push_back({"a", i, "p", "q=ridge(alpha=1);K=2", a[i], false});
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    rs.records.push_back({"b", i, "p", "lambda=inf", b[i], false});
  }
  return rs;
}

TEST(Config, MinimalSyntheticGetsDefaults) {
  auto c = ParseConfig(R"({
    // comments are allowed
    "mode": "synthetic",
    "seeds": {"count": 500},
    "estimators": ["dm", "ipw_ps"]
  })");
  EXPECT_EQ(c.mode, ExperimentMode::kSynthetic);
  EXPECT_EQ(c.sampler, SamplerMode::kTunedEstimatorParams);
  EXPECT_EQ(c.propensity, PropensityMode::kTrue);
  EXPECT_EQ(c.model_space.delta, 0.05);
  EXPECT_FALSE(c.outputs.z_max.has_value());
  EXPECT_EQ(c.outputs.cvar_alpha, 0.7);
  EXPECT_EQ(c.model_space.k_folds, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(c.model_space.random_search_iter, 5);
  ASSERT_EQ(c.estimators.size(), 2u);
  EXPECT_TRUE(c.estimators[0].grid.empty());
  EXPECT_EQ(c.estimators[1].grid.size(), 12u);
  EXPECT_EQ(c.synthetic.policies.size(), 4u);
  auto ieoe = ToIeoeConfig(c);
  ASSERT_EQ(ieoe.seeds.size(), 500u);
  for (std::size_t i = 0; i < 500; ++i) EXPECT_EQ(ieoe.seeds[i], i);
}

TEST(Config, ClassificationPreset) {
  auto c = ParseConfig(R"({"mode": "classification", "seeds": {"start": 3, "count": 2},
                           "estimators": ["dm"]})");
  const auto& p = c.classification.policies;
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p[0].family, "logistic");
  EXPECT_EQ(p[0].alpha, 0.8);
  EXPECT_EQ(p[1].alpha, 0.2);
  EXPECT_EQ(p[2].family, "boosting");
  EXPECT_EQ(p[4].family, "uniform");
  EXPECT_EQ(p[4].alpha, 0.0);
  EXPECT_EQ(c.classification.behavior.alpha, 0.9);
  EXPECT_EQ(c.classification.train_fraction, 0.3);
  EXPECT_EQ(ToIeoeConfig(c).seeds, (std::vector<std::uint64_t>{3, 4}));
}

TEST(Config, FullDocument) {
  auto c = ParseConfig(R"({
    "mode": "synthetic", "seeds": {"count": 3}, "sampler": "uniform",
    "propensity": "estimated", "bootstrap_size": 50, "workers": 4,
    "estimators": [{"kind": "dr_ps", "name": "drps_small", "grid": [1, 10, "inf"]},
                   "oracle"],
    "model_space": {
      "reward_models": ["linear",
                        {"family": "boosting",
                         "space": {"learning_rate": {"range": [0.01, 0.1], "log": true},
                                   "max_depth": {"choices": [2, 3]},
                                   "n_estimators": 10}}],
      "k_folds": [1, 2], "delta": 0.1,
      "calibration": {"method": "temperature", "holdout_fraction": 0.3}
    },
    "synthetic": {"n": 100, "n_actions": 3, "dim_context": 2,
                  "reward_kind": "continuous",
                  "policies": [{"name": "good", "base": "optimal", "alpha": 0.5}]},
    "outputs": {"z_max": 0.25, "cvar_alpha": 0.5, "exclude_flagged": true, "plot": false}
  })");
  EXPECT_EQ(c.sampler, SamplerMode::kUniformRandom);
  EXPECT_EQ(c.propensity, PropensityMode::kEstimated);
  EXPECT_EQ(c.bootstrap_size, 50u);
  EXPECT_EQ(c.workers, 4);
  EXPECT_EQ(c.estimators[0].name, "drps_small");
  EXPECT_TRUE(std::isinf(c.estimators[0].grid[2]));
  EXPECT_EQ(c.estimators[1].kind, "oracle");
  const auto& boost = c.model_space.reward_models[1];
  EXPECT_TRUE(boost.space.at("learning_rate").log_scale);
  EXPECT_EQ(boost.space.at("max_depth").choices, (std::vector<double>{2, 3}));
  EXPECT_TRUE(boost.space.at("n_estimators").IsSinglePoint());
  EXPECT_EQ(c.model_space.holdout_fraction, 0.3);
  EXPECT_EQ(c.synthetic.reward_kind, RewardKind::kContinuous);
  EXPECT_EQ(*c.outputs.z_max, 0.25);
  EXPECT_FALSE(c.outputs.plot);
  auto est = BuildEstimators(c, false);
  ASSERT_EQ(est.size(), 2u);
  EXPECT_EQ(est[0]->name(), "drps_small");
  EXPECT_EQ(est[1]->name(), "oracle");
}

TEST(Config, Errors) {
  auto msg = ExpectCode(ErrorCode::kValidationError, [] {
    ParseConfig(R"({"mode": "synthetic", "seeds": {"count": 1}, "estimators": ["dm", "magic"]})");
  });
  EXPECT_NE(msg.find("estimators[1]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("magic"), std::string::npos) << msg;
  msg = ExpectCode(ErrorCode::kParseError, [] {
    ParseConfig("{\n  \"mode\": \"synthetic\",\n  \"seeds\": ,\n}");
  });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  msg = ExpectCode(ErrorCode::kValidationError, [] {
    ParseConfig(R"({"mode": "synthetic", "seeds": {"count": 1}, "estimators": ["dm"], "typo": 1})");
  });
  EXPECT_NE(msg.find("typo"), std::string::npos) << msg;
  msg = ExpectCode(ErrorCode::kValidationError, [] {
    ParseConfig(R"({"mode": "synthetic", "seeds": {"count": 0}, "estimators": ["dm"]})");
  });
  EXPECT_NE(msg.find("seeds.count"), std::string::npos) << msg;
  ExpectCode(ErrorCode::kValidationError, [] {
    ParseConfig(R"({"mode": "synthetic", "seeds": {"count": 1},
                    "estimators": [{"kind": "dr_ps", "grid": []}]})");
  });
  ExpectCode(ErrorCode::kValidationError, [] {
    ParseConfig(R"({"mode": "classification", "seeds": {"count": 1}, "estimators": ["dm"],
                    "classification": {"csv": "does/not/exist.csv"}})");
  });
  ExpectCode(ErrorCode::kValidationError, [] {
    ParseConfig(R"({"mode": "synthetic", "seeds": {"count": 1}, "estimators": ["dm"],
                    "model_space": {"behavior_models": ["ridge"]}})");
  });
  ExpectCode(ErrorCode::kIoError, [] { LoadConfig("/nonexistent/config.json"); });
}

TEST(Config, RelativePathsResolveAgainstConfigDir) {
  TempDir dir;
  WriteTextFile(dir.path() / "data.csv", "f0,label\n0.5,0\n1.5,1\n");
  WriteTextFile(dir.path() / "cfg.json",
                R"({"mode": "classification", "seeds": {"count": 1},
                    "estimators": ["dm"], "classification": {"csv": "data.csv"}})");
  auto c = LoadConfig(dir.path() / "cfg.json");
  EXPECT_EQ(*c.classification.csv, dir.path() / "data.csv");
}

TEST(FeedbackCsv, WellFormed) {
  auto fb = ParseFeedbackCsv(
      "f0,f1,action,reward,propensity\n"
      "0.1,0.2,0,1,0.5\n"
      "0.3,-1,2,0,0.25\n"
      "1e-3,4,1,0.5,1\n");
  EXPECT_EQ(fb.size(), 3u);
  EXPECT_EQ(fb.dim(), 2u);
  EXPECT_EQ(fb.n_actions, 3);
  EXPECT_EQ(fb.r_max, 1.0);
  EXPECT_EQ(fb.contexts(2, 0), 1e-3);
  EXPECT_EQ((*fb.propensities)[1], 0.25);
  EXPECT_NO_THROW(ValidateFeedback(fb));
}

TEST(FeedbackCsv, Errors) {
  auto msg = ExpectCode(ErrorCode::kSchemaViolation, [] {
    ParseFeedbackCsv("f0,action,reward\n0,0,1\n0,1,-0.5\n");
  });
  EXPECT_NE(msg.find("reward"), std::string::npos) << msg;
  EXPECT_NE(msg.find("3"), std::string::npos) << msg;
  ExpectCode(ErrorCode::kMissingPropensities, [] {
    FeedbackCsvOptions o;
    o.require_propensities = true;
    ParseFeedbackCsv("f0,action,reward\n0,0,1\n", o);
  });
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParseFeedbackCsv("x,action,reward\n0,0,1\n"); });
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParseFeedbackCsv("f0,action,reward\n0,zero,1\n"); });
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParseFeedbackCsv("f0,action,reward\n0,0\n"); });
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParseFeedbackCsv("f0,action,reward,propensity\n0,0,1,0\n"); });
}

TEST(ClassificationCsv, Parses) {
  auto ds = ParseClassificationCsv("f0,f1,label\n0,1,2\n1,0,0\n2,2,1\n");
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.n_classes, 3);
  EXPECT_EQ(ds.labels, (std::vector<int>{2, 0, 1}));
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParseClassificationCsv("f0,label\n0,-1\n"); });
}

TEST(PolicyCsv, LookupByFeatures) {
  auto t = ParsePolicyCsv("f0,f1,p0,p1\n0,1,0.25,0.75\n1,1,1,0\n");
  EXPECT_EQ(t.dim, 2);
  EXPECT_EQ(t.n_actions, 2);
  Matrix x(3, 2);
  x << 1, 1, 0, 1, 0, 1;
  auto d = t.Lookup(x);
  EXPECT_EQ(d(0, 0), 1.0);
  EXPECT_EQ(d(1, 1), 0.75);
  EXPECT_EQ(d(2, 0), 0.25);
  Matrix missing(1, 2);
  missing << 5, 5;
  ExpectCode(ErrorCode::kSchemaViolation, [&] { t.Lookup(missing); });
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParsePolicyCsv("f0,p0,p1\n0,0.5,0.6\n"); });
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParsePolicyCsv("f0,p0,p1\n0,0.5,0.5\n0,0.4,0.6\n"); });
}

TEST(CsvHelpers, QuotingRoundTrip) {
  for (std::string s : {"plain", "a,b", "say \"hi\"", " lead", ""}) {
    auto fields = SplitCsvLine(EscapeCsvField(s) + ",x");
    ASSERT_EQ(fields.size(), 2u);
    EXPECT_EQ(fields[0], s);
  }
}

TEST(SquaredErrorsCsv, RoundTripPreservesScores) {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> ln(-3.0, 2.0);
  std::vector<double> a(50), b(50);
  for (auto& v : a) v = ln(rng);
  for (auto& v : b) v = ln(rng);
  b[3] = std::numeric_limits<double>::infinity();
  auto rs = TwoEstimators(a, b);
  rs.records[50 + 3].flagged = true;
  rs.records[50 + 3].theta_digest = "failed: zero, weight \"sum\"";
  auto back = ParseSquaredErrorsCsv(FormatSquaredErrorsCsv(rs));
  ASSERT_EQ(back.records.size(), rs.records.size());
  EXPECT_EQ(back.estimators, rs.estimators);
  for (std::size_t i = 0; i < rs.records.size(); ++i) {
    EXPECT_EQ(back.records[i].squared_error, rs.records[i].squared_error);
    EXPECT_EQ(back.records[i].theta_digest, rs.records[i].theta_digest);
    EXPECT_EQ(back.records[i].flagged, rs.records[i].flagged);
    EXPECT_EQ(back.records[i].seed, rs.records[i].seed);
  }
  for (bool ex : {false, true}) {
    auto s1 = SummarizeResults(rs, 0.1, 0.7, ex);
    auto s2 = SummarizeResults(back, 0.1, 0.7, ex);
    for (std::size_t e = 0; e < 2; ++e) {
      EXPECT_EQ(s1[e].scores.au_cdf, s2[e].scores.au_cdf);
      EXPECT_EQ(s1[e].scores.cvar, s2[e].scores.cvar);
      EXPECT_EQ(s1[e].scores.mean, s2[e].scores.mean);
    }
  }
  EXPECT_EQ(FormatSquaredErrorsCsv(back), FormatSquaredErrorsCsv(rs));
  ExpectCode(ErrorCode::kSchemaViolation,
             [] { ParseSquaredErrorsCsv("estimator,seed\nx,1\n"); });
}

TEST(Export, NormalizationRules) {
  std::vector<EstimatorSummary> one = {{"a", {2.0, 0.5, 3.0, 1.0}, 0}};
  auto n1 = NormalizeScores(one);
  EXPECT_EQ(n1[0].mean, 1.0);
  EXPECT_EQ(n1[0].au_cdf, 1.0);
  EXPECT_EQ(n1[0].cvar, 1.0);
  EXPECT_EQ(n1[0].std, 1.0);
  std::vector<EstimatorSummary> two = {{"a", {2.0, 0.5, 3.0, 1.0}, 0},
                                       {"b", {4.0, 0.25, 1.5, 4.0}, 0}};
  auto n2 = NormalizeScores(two);
  EXPECT_EQ(n2[0].mean, 1.0);
  EXPECT_EQ(n2[1].mean, 2.0);
  EXPECT_EQ(n2[0].au_cdf, 1.0);
  EXPECT_EQ(n2[1].au_cdf, 0.5);
  EXPECT_EQ(n2[0].cvar, 2.0);
  EXPECT_EQ(n2[1].cvar, 1.0);
  EXPECT_EQ(n2[1].std, 4.0);
}

TEST(Export, OracleRowsAndByteIdenticalRerun) {
  auto rs = TwoEstimators({0, 0, 0}, {0.5, 0.1, 2.0});
  rs.estimators[0] = "oracle";
  for (auto& r : rs.records) {
    if (r.estimator == "a") r.estimator = "oracle";
  }
  auto sums = SummarizeResults(rs, 1.0, 0.7);
  TempDir d1, d2;
  ExportResults(rs, sums, 1.0, 0.7, d1.path() / "out");
  ExportResults(rs, sums, 1.0, 0.7, d2.path());
  auto summary = ReadTextFile(d1.path() / "out" / "summary.csv");
  EXPECT_EQ(summary, ReadTextFile(d2.path() / "summary.csv"));
  EXPECT_EQ(ReadTextFile(d1.path() / "out" / "squared_errors.csv"),
            ReadTextFile(d2.path() / "squared_errors.csv"));
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "estimator,mean,au_cdf,cvar,std,mean_norm,au_cdf_norm,cvar_norm,"
            "std_norm,n,flagged,z_max,cvar_alpha");
  auto line = summary.substr(summary.find('\n') + 1);
  auto f = SplitCsvLine(line.substr(0, line.find('\n')));
  EXPECT_EQ(f[0], "oracle");
  EXPECT_EQ(f[1], "0");
  EXPECT_EQ(f[2], "1");
  EXPECT_EQ(f[3], "0");
  EXPECT_EQ(f[4], "0");
  EXPECT_EQ(f[9], "3");
}

TEST(Plot, StepPointsMatchEmpiricalCdf) {
  auto pts = CdfStepPoints({1.0, 3.0}, 4.0);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0].z, 0.0);
  EXPECT_EQ(pts[0].f, 0.0);
  EXPECT_EQ(pts[1].z, 1.0);
  EXPECT_EQ(pts[1].f, 0.5);
  EXPECT_EQ(pts[2].z, 3.0);
  EXPECT_EQ(pts[2].f, 1.0);
  EXPECT_EQ(pts[3].z, 4.0);
  auto oracle = CdfStepPoints({0.0, 0.0, 0.0}, 2.0);
  for (const auto& p : oracle) EXPECT_EQ(p.f, 1.0);
}

TEST(Plot, CsvAndSvg) {
  auto rs = TwoEstimators({1.0, 3.0}, {3.0, 1.0});
  auto csv = FormatCdfPointsCsv(rs, 4.0);
  EXPECT_NE(csv.find("a,1,0.5\n"), std::string::npos) << csv;
  // Identical Z give coincident point sets.
  std::string a_pts, b_pts;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "estimator,z,F");
  while (std::getline(in, line)) {
    (line[0] == 'a' ? a_pts : b_pts) += line.substr(1) + "\n";
  }
  EXPECT_EQ(a_pts, b_pts);
  auto svg = RenderCdfSvg(rs, 4.0);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find(">a<"), std::string::npos);
  EXPECT_NE(svg.find(">b<"), std::string::npos);
  TempDir d;
  RenderCdfPlot(rs, 4.0, d.path() / "cdf.svg");
  EXPECT_EQ(ReadTextFile(d.path() / "cdf.svg"), svg);
  EXPECT_EQ(ReadTextFile(d.path() / "cdf_points.csv"), csv);
}

TEST(Experiment, SyntheticRunEndToEnd) {
  auto c = ParseConfig(R"({
    "mode": "synthetic", "seeds": {"count": 4}, "sampler": "uniform",
    "estimators": ["oracle", "snipw", "dm"],
    "model_space": {"reward_models": ["linear"], "k_folds": [1]},
    "synthetic": {"n": 100, "n_mc": 2000, "n_actions": 3, "dim_context": 2}
  })");
  auto rs = RunExperiment(c);
  EXPECT_EQ(rs.records.size(), 12u);
  for (const auto& r : rs.records) {
    if (r.estimator == "oracle") {
      EXPECT_EQ(r.squared_error, 0.0);
    }
    EXPECT_FALSE(r.flagged);
  }
  EXPECT_EQ(FormatSquaredErrorsCsv(rs), FormatSquaredErrorsCsv(RunExperiment(c)));
}

TEST(Experiment, ClassificationGroundTruthIsAccuracyMixture) {
  ClassificationSource src;
  src.n = 600;
  src.n_classes = 3;
  src.dim = 2;
  src.policies = {{"u", "uniform", 0.0}, {"l", "logistic", 0.5}};
  auto in = PrepareClassification(src);
  EXPECT_EQ(in.data.size(), 420u);
  EXPECT_EQ(in.policies[0].ground_truth, 1.0 / 3.0);
  EXPECT_GT(in.policies[1].ground_truth, 1.0 / 3.0);
}

}  // namespace
}  // namespace ieoe::io
