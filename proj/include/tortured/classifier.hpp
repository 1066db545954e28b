#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "tortured/forest.hpp"
#include "tortured/perceptron.hpp"
#include "tortured/tfidf.hpp"

namespace tortured {

enum class ClassifierKind { Perceptron, Forest };

std::string_view to_string(ClassifierKind kind);
// Accepts "perceptron" and "forest"; throws ConfigError otherwise.
ClassifierKind parse_classifier_kind(std::string_view name);

// A trained model bound to the feature space it was trained in.
class Classifier {
 public:
  static constexpr int kFormatVersion = 1;

  Classifier(PerceptronModel model, const TfIdfModel& vectorizer);
  Classifier(ForestModel model, const TfIdfModel& vectorizer);

  ClassifierKind kind() const;
  int predict(const SparseVector& x) const;
  // Perceptron: signed activation. Forest: fraction of trees voting 1.
  double decision_score(const SparseVector& x) const;

  const PerceptronModel* perceptron() const { return std::get_if<PerceptronModel>(&model_); }
  const ForestModel* forest() const { return std::get_if<ForestModel>(&model_); }

  // Throws VersionMismatch when `vectorizer` is not the one this model was
  // trained against.
  void check_compatible(const TfIdfModel& vectorizer) const;

  nlohmann::ordered_json to_json() const;
  static Classifier from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Classifier load(const std::filesystem::path& path);

 private:
  Classifier() = default;

  std::variant<PerceptronModel, ForestModel> model_;
  std::size_t dimension_ = 0;
  std::uint64_t vectorizer_fingerprint_ = 0;
};

}  // namespace tortured
