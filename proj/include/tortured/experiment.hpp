#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tortured/classifier.hpp"
#include "tortured/metrics.hpp"
#include "tortured/ngram.hpp"
#include "tortured/split.hpp"
#include "tortured/tfidf.hpp"

namespace tortured {

struct ExperimentConfig {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> lexicon;  // needed for phrase-disjoint splits
  ClassifierKind classifier = ClassifierKind::Forest;
  SplitSpec split;
  std::uint64_t seed = 0;
  std::filesystem::path output;  // prefix for model/vectorizer/report files
  ForestOptions forest;
  PerceptronOptions perceptron;
};

/// Parses and validates a config object. Relative paths are resolved
/// against `base_dir`. All problems are collected into one ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SplitStats {
  std::size_t train_positive = 0;
  std::size_t train_negative = 0;
  std::size_t test_positive = 0;
  std::size_t test_negative = 0;

  double realized_train_fraction() const;
};

// One row of the classification results table.
struct ExperimentReport {
  ClassifierKind classifier = ClassifierKind::Forest;
  SplitSpec split;
  std::uint64_t seed = 0;
  SplitStats stats;
  Metrics metrics;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

struct ExperimentResult {
  ExperimentReport report;
  TfIdfModel vectorizer;
  Classifier model;
};

// Splits, fits the vectorizer on the training side only, trains and scores
// the test side. `lexicon` may be null for random splits.
ExperimentResult run_experiment(const std::vector<LabeledWindow>& windows,
                                const Lexicon* lexicon, const ExperimentConfig& config);

// Loads the dataset (and lexicon) named by `config`, then runs it.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Rebuilds the config's test split and scores an already trained model on
/// it. Throws VersionMismatch if model and vectorizer do not belong
/// together.
ExperimentReport evaluate_model(const ExperimentConfig& config, const Classifier& model,
                                const TfIdfModel& vectorizer);

}  // namespace tortured
