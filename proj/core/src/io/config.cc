#include "ieoe/io/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ieoe/error.h"
#include "ieoe/estimators.h"
#include "ieoe/tuning.h"

namespace ieoe::io {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kValidationError, fmt::format("{}: {}", field, what));
}

// A JSON object being read; rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Invalid(Name(), "expected an object");
  }

  std::string Field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string Name() const { return path_.empty() ? "<root>" : path_; }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  const json& Require(const std::string& key) {
    const json* v = Find(key);
    if (!v) Invalid(Field(key), "required field is missing");
    return *v;
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) Invalid(Field(it.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double AsNumber(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity") return kInf;
  }
  Invalid(field, "expected a number");
}

double AsFinite(const json& v, const std::string& field) {
  double d = AsNumber(v, field);
  if (!std::isfinite(d)) Invalid(field, "expected a finite number");
  return d;
}

std::int64_t AsInteger(const json& v, const std::string& field) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 9e15) {
      return static_cast<std::int64_t>(d);
    }
  }
  Invalid(field, "expected an integer");
}

std::size_t AsCount(const json& v, const std::string& field, std::size_t min) {
  std::int64_t i = AsInteger(v, field);
  if (i < static_cast<std::int64_t>(min)) {
    Invalid(field, fmt::format("must be >= {}", min));
  }
  return static_cast<std::size_t>(i);
}

std::uint64_t AsSeed(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  std::int64_t i = AsInteger(v, field);
  if (i < 0) Invalid(field, "must be nonnegative");
  return static_cast<std::uint64_t>(i);
}

std::string AsString(const json& v, const std::string& field) {
  if (!v.is_string()) Invalid(field, "expected a string");
  return v.get<std::string>();
}

bool AsBool(const json& v, const std::string& field) {
  if (!v.is_boolean()) Invalid(field, "expected true or false");
  return v.get<bool>();
}

double AsProbability(const json& v, const std::string& field) {
  double d = AsFinite(v, field);
  if (d < 0.0 || d > 1.0) Invalid(field, "must lie in [0, 1]");
  return d;
}

const json& AsArray(const json& v, const std::string& field) {
  if (!v.is_array()) Invalid(field, "expected an array");
  return v;
}

std::string Item(const std::string& field, std::size_t i) {
  return fmt::format("{}[{}]", field, i);
}

HyperparamRange ParseRange(const json& v, const std::string& field) {
  if (v.is_number()) return HyperparamRange::Fixed(AsFinite(v, field));
  Section s(v, field);
  HyperparamRange r;
  if (const json* c = s.Find("choices")) {
    const std::string f = s.Field("choices");
    for (std::size_t i = 0; i < AsArray(*c, f).size(); ++i) {
      r.choices.push_back(AsFinite((*c)[i], Item(f, i)));
    }
    if (r.choices.empty()) Invalid(f, "must not be empty");
  } else {
    const json& range = s.Require("range");
    const std::string f = s.Field("range");
    if (!range.is_array() || range.size() != 2) {
      Invalid(f, "expected [lower, upper]");
    }
    r.lower = AsFinite(range[0], Item(f, 0));
    r.upper = AsFinite(range[1], Item(f, 1));
    if (r.lower > r.upper) Invalid(f, "lower exceeds upper");
    if (const json* l = s.Find("log")) r.log_scale = AsBool(*l, s.Field("log"));
    if (const json* i = s.Find("integer")) {
      r.integer = AsBool(*i, s.Field("integer"));
    }
    if (r.log_scale && r.lower <= 0.0) Invalid(f, "log range must be positive");
  }
  s.Finish();
  return r;
}

ModelEntry ParseModel(const json& v, const std::string& field) {
  ModelEntry m;
  if (v.is_string()) {
    m.family = v.get<std::string>();
  } else {
    Section s(v, field);
    m.family = AsString(s.Require("family"), s.Field("family"));
    if (const json* sp = s.Find("space")) {
      Section space(*sp, s.Field("space"));
      for (auto it = sp->begin(); it != sp->end(); ++it) {
        space.Find(it.key());
        m.space[it.key()] = ParseRange(it.value(), space.Field(it.key()));
      }
      space.Finish();
    }
    s.Finish();
  }
  if (m.family != "linear" && !ParseModelFamily(m.family)) {
    Invalid(field, fmt::format("unknown model family '{}'", m.family));
  }
  if (!m.space.empty() && m.family == "linear") {
    Invalid(field, "'linear' uses the default ranges; name 'logistic' or "
                   "'ridge' to give a space");
  }
  if (!m.space.empty()) {
    try {
      ValidateSpace(m.space);
      ModelSpec probe;
      probe.family = *ParseModelFamily(m.family);
      for (const auto& [name, range] : m.space) {
        probe.hyperparams[name] =
            range.choices.empty() ? range.upper : range.choices.front();
      }
      ValidateModelSpec(probe);
    } catch (const Error& e) {
      Invalid(field, e.what());
    }
  }
  return m;
}

std::vector<ModelEntry> ParseModels(const json& v, const std::string& field) {
  std::vector<ModelEntry> out;
  for (std::size_t i = 0; i < AsArray(v, field).size(); ++i) {
    out.push_back(ParseModel(v[i], Item(field, i)));
  }
  if (out.empty()) Invalid(field, "must not be empty");
  return out;
}

void ParseModelSpace(const json& v, const std::string& field,
                     ModelSpaceConfig& m) {
  Section s(v, field);
  if (const json* r = s.Find("reward_models")) {
    m.reward_models = ParseModels(*r, s.Field("reward_models"));
  }
  if (const json* b = s.Find("behavior_models")) {
    m.behavior_models = ParseModels(*b, s.Field("behavior_models"));
    for (std::size_t i = 0; i < m.behavior_models.size(); ++i) {
      const auto& fam = m.behavior_models[i].family;
      if (fam != "logistic" && fam != "boosting") {
        Invalid(Item(s.Field("behavior_models"), i),
                "behavior models must be logistic or boosting");
      }
    }
  }
  if (const json* k = s.Find("k_folds")) {
    const std::string f = s.Field("k_folds");
    m.k_folds.clear();
    for (std::size_t i = 0; i < AsArray(*k, f).size(); ++i) {
      m.k_folds.push_back(static_cast<int>(AsCount((*k)[i], Item(f, i), 1)));
    }
    if (m.k_folds.empty()) Invalid(f, "must not be empty");
  }
  if (const json* r = s.Find("random_search_iter")) {
    m.random_search_iter =
        static_cast<int>(AsCount(*r, s.Field("random_search_iter"), 1));
  }
  if (const json* d = s.Find("delta")) {
    m.delta = AsFinite(*d, s.Field("delta"));
    if (!(m.delta > 0.0 && m.delta < 1.0)) {
      Invalid(s.Field("delta"), "must lie in (0, 1)");
    }
  }
  if (const json* c = s.Find("calibration")) {
    const std::string f = s.Field("calibration");
    if (c->is_string() && c->get<std::string>() == "none") {
      m.temperature_scaling = false;
    } else {
      Section cs(*c, f);
      const std::string method =
          AsString(cs.Require("method"), cs.Field("method"));
      if (method == "none") {
        m.temperature_scaling = false;
      } else if (method == "temperature") {
        m.temperature_scaling = true;
      } else {
        Invalid(cs.Field("method"), "expected 'temperature' or 'none'");
      }
      if (const json* h = cs.Find("holdout_fraction")) {
        m.holdout_fraction = AsFinite(*h, cs.Field("holdout_fraction"));
        if (!(m.holdout_fraction > 0.0 && m.holdout_fraction < 1.0)) {
          Invalid(cs.Field("holdout_fraction"), "must lie in (0, 1)");
        }
      }
      cs.Finish();
    }
  }
  s.Finish();
}

std::vector<EstimatorEntry> ParseEstimators(const json& v,
                                            const std::string& field) {
  std::vector<EstimatorEntry> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < AsArray(v, field).size(); ++i) {
    const std::string f = Item(field, i);
    EstimatorEntry e;
    if (v[i].is_string()) {
      e.name = e.kind = v[i].get<std::string>();
    } else {
      Section s(v[i], f);
      e.kind = AsString(s.Require("kind"), s.Field("kind"));
      e.name = e.kind;
      if (const json* n = s.Find("name")) e.name = AsString(*n, s.Field("name"));
      if (const json* g = s.Find("grid")) {
        const std::string gf = s.Field("grid");
        for (std::size_t k = 0; k < AsArray(*g, gf).size(); ++k) {
          double x = AsNumber((*g)[k], Item(gf, k));
          if (!(x >= 0.0)) Invalid(Item(gf, k), "must be nonnegative");
          e.grid.push_back(x);
        }
        if (e.grid.empty()) Invalid(gf, "must not be empty");
      }
      s.Finish();
    }
    std::optional<EstimatorKind> kind = ParseEstimatorKind(e.kind);
    if (!kind && e.kind != "oracle") {
      Invalid(f, fmt::format("unknown estimator '{}'", e.kind));
    }
    if (e.grid.empty() && kind &&
        ShrinkageParamOf(*kind) != ShrinkageParam::kNone) {
      e.grid = DefaultShrinkageGrid();
    }
    if (e.name.empty() || e.name.find_first_of(",\"\n") != std::string::npos) {
      Invalid(f, "estimator names must be nonempty and CSV-safe");
    }
    if (!names.insert(e.name).second) {
      Invalid(f, fmt::format("duplicate estimator name '{}'", e.name));
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) Invalid(field, "must not be empty");
  return out;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

void ParseSynthetic(const json& v, const std::string& field,
                    SyntheticSource& src) {
  Section s(v, field);
  if (const json* d = s.Find("dim_context")) {
    src.dim_context = static_cast<int>(AsCount(*d, s.Field("dim_context"), 1));
  }
  if (const json* a = s.Find("n_actions")) {
    src.n_actions = static_cast<int>(AsCount(*a, s.Field("n_actions"), 2));
  }
  if (const json* k = s.Find("reward_kind")) {
    std::string kind = AsString(*k, s.Field("reward_kind"));
    if (kind == "binary") {
      src.reward_kind = RewardKind::kBinary;
    } else if (kind == "continuous") {
      src.reward_kind = RewardKind::kContinuous;
    } else {
      Invalid(s.Field("reward_kind"), "expected 'binary' or 'continuous'");
    }
  }
  if (const json* b = s.Find("behavior_scale")) {
    src.behavior_scale = AsFinite(*b, s.Field("behavior_scale"));
  }
  if (const json* e = s.Find("env_seed")) {
    src.env_seed = AsSeed(*e, s.Field("env_seed"));
  }
  if (const json* d = s.Find("data_seed")) {
    src.data_seed = AsSeed(*d, s.Field("data_seed"));
  }
  if (const json* n = s.Find("n")) src.n = AsCount(*n, s.Field("n"), 2);
  if (const json* m = s.Find("n_mc")) src.n_mc = AsCount(*m, s.Field("n_mc"), 1);
  if (const json* p = s.Find("policies")) {
    const std::string f = s.Field("policies");
    for (std::size_t i = 0; i < AsArray(*p, f).size(); ++i) {
      Section ps((*p)[i], Item(f, i));
      SyntheticPolicyEntry e;
      e.name = AsString(ps.Require("name"), ps.Field("name"));
      if (const json* b = ps.Find("base")) e.base = AsString(*b, ps.Field("base"));
      if (e.base != "optimal" && e.base != "worst" && e.base != "uniform") {
        Invalid(ps.Field("base"), "expected 'optimal', 'worst' or 'uniform'");
      }
      if (const json* a = ps.Find("alpha")) {
        e.alpha = AsProbability(*a, ps.Field("alpha"));
      }
      ps.Finish();
      src.policies.push_back(std::move(e));
    }
    if (src.policies.empty()) Invalid(f, "must not be empty");
  }
  s.Finish();
}

ClassificationPolicyEntry ParseClassificationPolicy(const json& v,
                                                    const std::string& field,
                                                    bool need_name) {
  Section s(v, field);
  ClassificationPolicyEntry e;
  if (need_name) {
    e.name = AsString(s.Require("name"), s.Field("name"));
  } else if (const json* n = s.Find("name")) {
    e.name = AsString(*n, s.Field("name"));
  } else {
    e.name = "behavior";
  }
  e.family = AsString(s.Require("family"), s.Field("family"));
  if (e.family != "logistic" && e.family != "boosting" &&
      e.family != "uniform") {
    Invalid(s.Field("family"), "expected 'logistic', 'boosting' or 'uniform'");
  }
  e.alpha = e.family == "uniform" ? 0.0 : 0.9;
  if (const json* a = s.Find("alpha")) {
    e.alpha = AsProbability(*a, s.Field("alpha"));
  }
  if (e.family == "uniform" && e.alpha != 0.0) {
    Invalid(s.Field("alpha"), "the uniform policy takes alpha = 0");
  }
  s.Finish();
  return e;
}

void ParseClassification(const json& v, const std::string& field,
                         const std::filesystem::path& base,
                         ClassificationSource& src) {
  Section s(v, field);
  if (const json* c = s.Find("csv")) src.csv = Resolve(base, AsString(*c, s.Field("csv")));
  if (const json* n = s.Find("n")) src.n = AsCount(*n, s.Field("n"), 2);
  if (const json* k = s.Find("n_classes")) {
    src.n_classes = static_cast<int>(AsCount(*k, s.Field("n_classes"), 2));
  }
  if (const json* d = s.Find("dim")) src.dim = static_cast<int>(AsCount(*d, s.Field("dim"), 1));
  if (const json* c = s.Find("class_sep")) {
    src.class_sep = AsFinite(*c, s.Field("class_sep"));
  }
  if (const json* d = s.Find("data_seed")) src.data_seed = AsSeed(*d, s.Field("data_seed"));
  if (const json* t = s.Find("train_fraction")) {
    src.train_fraction = AsFinite(*t, s.Field("train_fraction"));
    if (!(src.train_fraction > 0.0 && src.train_fraction < 1.0)) {
      Invalid(s.Field("train_fraction"), "must lie in (0, 1)");
    }
  }
  if (const json* sp = s.Find("split_seed")) {
    src.split_seed = AsSeed(*sp, s.Field("split_seed"));
  }
  if (const json* b = s.Find("behavior")) {
    src.behavior = ParseClassificationPolicy(*b, s.Field("behavior"), false);
  }
  if (const json* p = s.Find("policies")) {
    const std::string f = s.Field("policies");
    for (std::size_t i = 0; i < AsArray(*p, f).size(); ++i) {
      src.policies.push_back(
          ParseClassificationPolicy((*p)[i], Item(f, i), true));
    }
    if (src.policies.empty()) Invalid(f, "must not be empty");
  }
  if (const json* c = s.Find("classifier")) {
    Section cs(*c, s.Field("classifier"));
    auto& cp = src.classifier;
    if (const json* x = cs.Find("C")) {
      cp.c = AsFinite(*x, cs.Field("C"));
      if (!(cp.c > 0.0)) Invalid(cs.Field("C"), "must be positive");
    }
    if (const json* x = cs.Find("learning_rate")) {
      cp.learning_rate = AsFinite(*x, cs.Field("learning_rate"));
      if (!(cp.learning_rate > 0.0)) {
        Invalid(cs.Field("learning_rate"), "must be positive");
      }
    }
    if (const json* x = cs.Find("max_depth")) {
      cp.max_depth = static_cast<int>(AsCount(*x, cs.Field("max_depth"), 1));
    }
    if (const json* x = cs.Find("min_samples_leaf")) {
      cp.min_samples_leaf =
          static_cast<int>(AsCount(*x, cs.Field("min_samples_leaf"), 1));
    }
    if (const json* x = cs.Find("n_estimators")) {
      cp.n_estimators =
          static_cast<int>(AsCount(*x, cs.Field("n_estimators"), 1));
    }
    cs.Finish();
  }
  s.Finish();
}

void ParseRealWorld(const json& v, const std::string& field,
                    const std::filesystem::path& base, RealWorldSource& src) {
  Section s(v, field);
  const std::string f = s.Field("logs");
  const json& logs = s.Require("logs");
  std::set<std::string> names;
  for (std::size_t i = 0; i < AsArray(logs, f).size(); ++i) {
    Section ls(logs[i], Item(f, i));
    RealWorldLogEntry e;
    e.name = AsString(ls.Require("name"), ls.Field("name"));
    e.feedback = Resolve(base, AsString(ls.Require("feedback"), ls.Field("feedback")));
    e.policy = Resolve(base, AsString(ls.Require("policy"), ls.Field("policy")));
    ls.Finish();
    if (!names.insert(e.name).second) {
      Invalid(Item(f, i), fmt::format("duplicate log name '{}'", e.name));
    }
    src.logs.push_back(std::move(e));
  }
  if (src.logs.size() < 2) Invalid(f, "at least two logs are required");
  s.Finish();
}

void ParseOutputs(const json& v, const std::string& field,
                  const std::filesystem::path& base, OutputConfig& out) {
  Section s(v, field);
  if (const json* d = s.Find("dir")) out.dir = Resolve(base, AsString(*d, s.Field("dir")));
  if (const json* z = s.Find("z_max")) {
    if (!(z->is_string() && z->get<std::string>() == "auto")) {
      out.z_max = AsFinite(*z, s.Field("z_max"));
      if (!(*out.z_max > 0.0)) Invalid(s.Field("z_max"), "must be positive");
    }
  }
  if (const json* a = s.Find("cvar_alpha")) {
    out.cvar_alpha = AsFinite(*a, s.Field("cvar_alpha"));
    if (!(out.cvar_alpha >= 0.0 && out.cvar_alpha < 1.0)) {
      Invalid(s.Field("cvar_alpha"), "must lie in [0, 1)");
    }
  }
  if (const json* e = s.Find("exclude_flagged")) {
    out.exclude_flagged = AsBool(*e, s.Field("exclude_flagged"));
  }
  if (const json* p = s.Find("plot")) out.plot = AsBool(*p, s.Field("plot"));
  s.Finish();
}

void CheckFilesExist(const ExperimentConfig& c) {
  auto check = [](const std::filesystem::path& p, const std::string& field) {
    if (!std::filesystem::exists(p)) {
      Invalid(field, fmt::format("file '{}' does not exist", p.string()));
    }
  };
  if (c.mode == ExperimentMode::kClassification && c.classification.csv) {
    check(*c.classification.csv, "classification.csv");
  }
  if (c.mode == ExperimentMode::kRealWorld) {
    for (std::size_t i = 0; i < c.realworld.logs.size(); ++i) {
      check(c.realworld.logs[i].feedback, Item("realworld.logs", i) + ".feedback");
      check(c.realworld.logs[i].policy, Item("realworld.logs", i) + ".policy");
    }
  }
}

}  // namespace

std::string_view ExperimentModeName(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kSynthetic: return "synthetic";
    case ExperimentMode::kClassification: return "classification";
    case ExperimentMode::kRealWorld: return "realworld";
  }
  return "?";
}

std::vector<ClassificationPolicyEntry> DefaultClassificationPolicies() {
  return {{"logistic_0.8", "logistic", 0.8},
          {"logistic_0.2", "logistic", 0.2},
          {"boosting_0.8", "boosting", 0.8},
          {"boosting_0.2", "boosting", 0.2},
          {"uniform", "uniform", 0.0}};
}

std::vector<SyntheticPolicyEntry> DefaultSyntheticPolicies() {
  return {{"optimal_0.8", "optimal", 0.8},
          {"optimal_0.2", "optimal", 0.2},
          {"worst_0.8", "worst", 0.8},
          {"uniform", "uniform", 0.0}};
}

ExperimentConfig ParseConfig(std::string_view text,
                             const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  ExperimentConfig c;
  Section s(root, "");
  const std::string mode = AsString(s.Require("mode"), "mode");
  if (mode == "synthetic") {
    c.mode = ExperimentMode::kSynthetic;
  } else if (mode == "classification") {
    c.mode = ExperimentMode::kClassification;
  } else if (mode == "realworld") {
    c.mode = ExperimentMode::kRealWorld;
  } else {
    Invalid("mode", fmt::format("unknown mode '{}'", mode));
  }
  {
    Section seeds(s.Require("seeds"), "seeds");
    if (const json* st = seeds.Find("start")) {
      c.seed_start = AsSeed(*st, "seeds.start");
    }
    c.seed_count = AsCount(seeds.Require("count"), "seeds.count", 1);
    seeds.Finish();
  }
  if (const json* sm = s.Find("sampler")) {
    std::string v = AsString(*sm, "sampler");
    if (v == "uniform") {
      c.sampler = SamplerMode::kUniformRandom;
    } else if (v == "tuned") {
      c.sampler = SamplerMode::kTunedEstimatorParams;
    } else {
      Invalid("sampler", "expected 'uniform' or 'tuned'");
    }
  }
  if (const json* p = s.Find("propensity")) {
    std::string v = AsString(*p, "propensity");
    if (v == "true") {
      c.propensity = PropensityMode::kTrue;
    } else if (v == "estimated") {
      c.propensity = PropensityMode::kEstimated;
    } else {
      Invalid("propensity", "expected 'true' or 'estimated'");
    }
  }
  if (const json* b = s.Find("bootstrap_size")) {
    c.bootstrap_size = AsCount(*b, "bootstrap_size", 1);
  }
  if (const json* f = s.Find("fail_fast")) c.fail_fast = AsBool(*f, "fail_fast");
  if (const json* w = s.Find("workers")) {
    c.workers = static_cast<int>(AsCount(*w, "workers", 1));
  }
  c.estimators = ParseEstimators(s.Require("estimators"), "estimators");
  if (const json* m = s.Find("model_space")) {
    ParseModelSpace(*m, "model_space", c.model_space);
  }
  const json* syn = s.Find("synthetic");
  const json* cls = s.Find("classification");
  const json* rw = s.Find("realworld");
  if (syn && c.mode != ExperimentMode::kSynthetic) {
    Invalid("synthetic", "only allowed in synthetic mode");
  }
  if (cls && c.mode != ExperimentMode::kClassification) {
    Invalid("classification", "only allowed in classification mode");
  }
  if (rw && c.mode != ExperimentMode::kRealWorld) {
    Invalid("realworld", "only allowed in realworld mode");
  }
  if (syn) ParseSynthetic(*syn, "synthetic", c.synthetic);
  if (cls) ParseClassification(*cls, "classification", base_dir, c.classification);
  if (c.mode == ExperimentMode::kRealWorld) {
    if (!rw) Invalid("realworld", "required in realworld mode");
    ParseRealWorld(*rw, "realworld", base_dir, c.realworld);
  }
  if (const json* o = s.Find("outputs")) {
    ParseOutputs(*o, "outputs", base_dir, c.outputs);
  }
  s.Finish();

  if (c.synthetic.policies.empty()) c.synthetic.policies = DefaultSyntheticPolicies();
  if (c.classification.policies.empty()) {
    c.classification.policies = DefaultClassificationPolicies();
  }
  if (c.model_space.reward_models.empty()) {
    c.model_space.reward_models = {{"linear", {}}, {"boosting", {}}};
  }
  if (c.model_space.behavior_models.empty()) {
    c.model_space.behavior_models = {{"logistic", {}}, {"boosting", {}}};
  }
  CheckFilesExist(c);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open config '{}'", path.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path.parent_path());
}

}  // namespace ieoe::io
