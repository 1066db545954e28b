#include "tortured/experiment.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "tortured/error.hpp"

namespace tortured {
namespace {

using nlohmann::json;

class ConfigReader {
 public:
  explicit ConfigReader(std::vector<std::string>& problems) : problems_(problems) {}

  std::optional<std::string> string(const json& obj, const char* key, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) problems_.push_back(fmt::format("'{}' is required", key));
      return std::nullopt;
    }
    if (!it->is_string() || it->get<std::string>().empty()) {
      problems_.push_back(fmt::format("'{}' must be a non-empty string", key));
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<std::uint64_t> unsigned_int(const json& obj, const char* key, std::uint64_t min) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      problems_.push_back(fmt::format("'{}' must be a non-negative integer", key));
      return std::nullopt;
    }
    const auto v = it->get<std::uint64_t>();
    if (v < min) {
      problems_.push_back(fmt::format("'{}' must be at least {}", key, min));
      return std::nullopt;
    }
    return v;
  }

  void unknown_keys(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.contains(key)) {
        problems_.push_back(fmt::format("unknown key '{}{}'", where, key));
      }
    }
  }

  void add(std::string problem) { problems_.push_back(std::move(problem)); }

 private:
  std::vector<std::string>& problems_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<Tokens> documents_of(const std::vector<LabeledWindow>& windows,
                                 const std::vector<std::size_t>& indices) {
  std::vector<Tokens> docs;
  docs.reserve(indices.size());
  for (std::size_t i : indices) docs.push_back(windows[i].tokens);
  return docs;
}

SplitStats stats_of(const std::vector<LabeledWindow>& windows, const Split& split) {
  SplitStats s;
  for (std::size_t i : split.train) ++(windows[i].label ? s.train_positive : s.train_negative);
  for (std::size_t i : split.test) ++(windows[i].label ? s.test_positive : s.test_negative);
  return s;
}

Metrics score(const std::vector<LabeledWindow>& windows, const std::vector<std::size_t>& test,
              const TfIdfModel& vectorizer, const Classifier& model) {
  std::vector<int> predicted, gold;
  predicted.reserve(test.size());
  gold.reserve(test.size());
  for (std::size_t i : test) {
    predicted.push_back(model.predict(vectorizer.transform(windows[i].tokens)));
    gold.push_back(windows[i].label);
  }
  return compute_metrics(predicted, gold);
}

struct LoadedData {
  std::vector<LabeledWindow> windows;
  std::optional<Lexicon> lexicon;
};

LoadedData load_data(const ExperimentConfig& config) {
  LoadedData data;
  data.windows = load_dataset(config.dataset);
  if (config.lexicon) {
    data.lexicon = load_lexicon(*config.lexicon);
    const std::size_t disagreements = attach_provenance(data.windows, *data.lexicon);
    if (disagreements > 0) {
      throw InputError(fmt::format(
          "{} dataset labels disagree with lexicon '{}'; was the dataset built from it?",
          disagreements, config.lexicon->string()));
    }
  }
  return data;
}

}  // namespace

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  ConfigReader r(problems);
  if (!j.is_object()) throw ConfigError(std::vector<std::string>{"config must be a JSON object"});

  r.unknown_keys(j, {"dataset", "lexicon", "classifier", "split", "seed", "output", "forest",
                     "perceptron"},
                 "");

  ExperimentConfig c;
  if (auto v = r.string(j, "dataset", true)) c.dataset = resolve(base_dir, *v);
  if (auto v = r.string(j, "lexicon", false)) c.lexicon = resolve(base_dir, *v);
  if (auto v = r.string(j, "output", true)) c.output = resolve(base_dir, *v);
  if (auto v = r.string(j, "classifier", true)) {
    try {
      c.classifier = parse_classifier_kind(*v);
    } catch (const ConfigError& e) {
      r.add(e.what());
    }
  }
  c.seed = r.unsigned_int(j, "seed", 0).value_or(0);
  c.split.seed = c.seed;

  if (const auto it = j.find("split"); it != j.end()) {
    if (!it->is_object()) {
      r.add("'split' must be an object");
    } else {
      r.unknown_keys(*it, {"mode", "train_fraction", "seed"}, "split.");
      if (auto v = r.string(*it, "mode", false)) {
        try {
          c.split.mode = parse_split_mode(*v);
        } catch (const ConfigError& e) {
          r.add(e.what());
        }
      }
      if (const auto f = it->find("train_fraction"); f != it->end()) {
        if (!f->is_number() || !(f->get<double>() > 0.0 && f->get<double>() < 1.0)) {
          r.add("'split.train_fraction' must be a number strictly between 0 and 1");
        } else {
          c.split.train_fraction = f->get<double>();
        }
      }
      if (auto s = r.unsigned_int(*it, "seed", 0)) c.split.seed = *s;
    }
  }
  if (c.split.mode != SplitMode::Random && !c.lexicon) {
    r.add(fmt::format("split mode '{}' needs 'lexicon'", to_string(c.split.mode)));
  }

  c.forest.seed = c.seed;
  if (const auto it = j.find("forest"); it != j.end()) {
    if (!it->is_object()) {
      r.add("'forest' must be an object");
    } else {
      r.unknown_keys(*it, {"n_trees", "max_depth", "max_features", "threads"}, "forest.");
      if (auto v = r.unsigned_int(*it, "n_trees", 1)) c.forest.n_trees = *v;
      if (auto v = r.unsigned_int(*it, "max_depth", 1)) c.forest.max_depth = *v;
      if (auto v = r.unsigned_int(*it, "max_features", 1)) c.forest.max_features = *v;
      if (auto v = r.unsigned_int(*it, "threads", 0)) c.forest.threads = *v;
    }
  }
  c.perceptron.seed = c.seed;
  if (const auto it = j.find("perceptron"); it != j.end()) {
    if (!it->is_object()) {
      r.add("'perceptron' must be an object");
    } else {
      r.unknown_keys(*it, {"max_epochs"}, "perceptron.");
      if (auto v = r.unsigned_int(*it, "max_epochs", 1)) c.perceptron.max_epochs = *v;
    }
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config '{}'", path.string()));
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError(std::vector<std::string>{fmt::format("'{}' is not valid JSON", path.string())});
  }
  return parse_config(j, path.parent_path());
}

double SplitStats::realized_train_fraction() const {
  const std::size_t train = train_positive + train_negative;
  const std::size_t total = train + test_positive + test_negative;
  return total == 0 ? 0.0 : static_cast<double>(train) / static_cast<double>(total);
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["classifier"] = std::string(tortured::to_string(classifier));
  j["data"] = std::string(tortured::to_string(split.mode));
  j["seed"] = seed;

  nlohmann::ordered_json row = tortured::to_json(metrics);
  row["n_train"] = stats.train_positive + stats.train_negative;
  row["n_test"] = stats.test_positive + stats.test_negative;
  j["row"] = std::move(row);

  const Confusion& c = metrics.confusion;
  j["confusion"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
  j["split"] = {{"mode", std::string(tortured::to_string(split.mode))},
                {"train_fraction", split.train_fraction},
                {"split_seed", split.seed},
                {"realized_train_fraction", stats.realized_train_fraction()},
                {"train_positive", stats.train_positive},
                {"train_negative", stats.train_negative},
                {"test_positive", stats.test_positive},
                {"test_negative", stats.test_negative}};
  return j;
}

std::string ExperimentReport::to_text() const {
  const Metrics& m = metrics;
  std::string out = fmt::format("{:<12}{:<26}{:>6}{:>7}{:>7}{:>7}{:>7}{:>7}{:>7}\n", "classifier",
                                "data", "acc", "P(0)", "P(1)", "R(0)", "R(1)", "F1(0)", "F1(1)");
  out += fmt::format("{:<12}{:<26}{:>6.3f}{:>7.3f}{:>7.3f}{:>7.3f}{:>7.3f}{:>7.3f}{:>7.3f}\n",
                     tortured::to_string(classifier), tortured::to_string(split.mode), m.accuracy,
                     m.precision[0], m.precision[1], m.recall[0], m.recall[1], m.f1[0], m.f1[1]);
  out += fmt::format("train {} ({} pos / {} neg), test {} ({} pos / {} neg), realized train share {:.3f}\n",
                     stats.train_positive + stats.train_negative, stats.train_positive,
                     stats.train_negative, stats.test_positive + stats.test_negative,
                     stats.test_positive, stats.test_negative, stats.realized_train_fraction());
  return out;
}

ExperimentResult run_experiment(const std::vector<LabeledWindow>& windows, const Lexicon* lexicon,
                                const ExperimentConfig& config) {
  const Split split = make_split(windows, lexicon, config.split);

  const std::vector<Tokens> train_docs = documents_of(windows, split.train);
  TfIdfModel vectorizer = TfIdfModel::fit(train_docs);

  std::vector<SparseVector> x;
  std::vector<int> y;
  x.reserve(train_docs.size());
  for (std::size_t k = 0; k < split.train.size(); ++k) {
    x.push_back(vectorizer.transform(train_docs[k]));
    y.push_back(windows[split.train[k]].label);
  }

  auto model = [&]() {
    if (config.classifier == ClassifierKind::Forest) {
      ForestOptions options = config.forest;
      options.seed = config.seed;
      return Classifier(train_forest(x, y, vectorizer.dimension(), options), vectorizer);
    }
    PerceptronOptions options = config.perceptron;
    options.seed = config.seed;
    return Classifier(train_perceptron(x, y, vectorizer.dimension(), options), vectorizer);
  }();

  ExperimentReport report;
  report.classifier = config.classifier;
  report.split = config.split;
  report.seed = config.seed;
  report.stats = stats_of(windows, split);
  report.metrics = score(windows, split.test, vectorizer, model);
  return {std::move(report), std::move(vectorizer), std::move(model)};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const LoadedData data = load_data(config);
  return run_experiment(data.windows, data.lexicon ? &*data.lexicon : nullptr, config);
}

ExperimentReport evaluate_model(const ExperimentConfig& config, const Classifier& model,
                                const TfIdfModel& vectorizer) {
  model.check_compatible(vectorizer);
  if (model.kind() != config.classifier) {
    throw ConfigError(fmt::format("config names a {} classifier but the model is a {}",
                                  to_string(config.classifier), to_string(model.kind())));
  }
  const LoadedData data = load_data(config);
  const Split split = make_split(data.windows, data.lexicon ? &*data.lexicon : nullptr,
                                 config.split);

  ExperimentReport report;
  report.classifier = model.kind();
  report.split = config.split;
  report.seed = config.seed;
  report.stats = stats_of(data.windows, split);
  report.metrics = score(data.windows, split.test, vectorizer, model);
  return report;
}

}  // namespace tortured
