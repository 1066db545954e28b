#include "tortured/classifier.hpp"

#include <fstream>

#include <fmt/format.h>

#include "tortured/error.hpp"

namespace tortured {

std::string_view to_string(ClassifierKind kind) {
  return kind == ClassifierKind::Forest ? "forest" : "perceptron";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  if (name == "forest") return ClassifierKind::Forest;
  if (name == "perceptron") return ClassifierKind::Perceptron;
  throw ConfigError(fmt::format("unknown classifier '{}' (expected forest|perceptron)", name));
}

Classifier::Classifier(PerceptronModel model, const TfIdfModel& vectorizer)
    : model_(std::move(model)),
      dimension_(vectorizer.dimension()),
      vectorizer_fingerprint_(vectorizer.fingerprint()) {}

Classifier::Classifier(ForestModel model, const TfIdfModel& vectorizer)
    : model_(std::move(model)),
      dimension_(vectorizer.dimension()),
      vectorizer_fingerprint_(vectorizer.fingerprint()) {}

ClassifierKind Classifier::kind() const {
  return std::holds_alternative<ForestModel>(model_) ? ClassifierKind::Forest
                                                     : ClassifierKind::Perceptron;
}

int Classifier::predict(const SparseVector& x) const {
  return std::visit([&x](const auto& m) { return m.predict(x); }, model_);
}

double Classifier::decision_score(const SparseVector& x) const {
  if (const auto* f = forest()) return f->vote_fraction(x);
  return perceptron()->decision(x);
}

void Classifier::check_compatible(const TfIdfModel& vectorizer) const {
  if (vectorizer.dimension() != dimension_ ||
      vectorizer.fingerprint() != vectorizer_fingerprint_) {
    throw VersionMismatch(fmt::format(
        "model was trained on a different vectorizer (dimension {} vs {}, "
        "fingerprint {:016x} vs {:016x})",
        dimension_, vectorizer.dimension(), vectorizer_fingerprint_,
        vectorizer.fingerprint()));
  }
}

nlohmann::ordered_json Classifier::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kFormatVersion;
  j["kind"] = std::string(to_string(kind()));
  j["dimension"] = dimension_;
  j["vectorizer_fingerprint"] = fmt::format("{:016x}", vectorizer_fingerprint_);
  j["model"] = std::visit([](const auto& m) { return m.to_json(); }, model_);
  return j;
}

Classifier Classifier::from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw VersionMismatch(
          fmt::format("model format version {} (expected {})", version, kFormatVersion));
    }
    Classifier c;
    c.dimension_ = j.at("dimension").get<std::size_t>();
    const auto fp = j.at("vectorizer_fingerprint").get<std::string>();
    c.vectorizer_fingerprint_ = std::stoull(fp, nullptr, 16);
    const ClassifierKind kind = parse_classifier_kind(j.at("kind").get<std::string>());
    if (kind == ClassifierKind::Forest) {
      ForestModel m = ForestModel::from_json(j.at("model"));
      if (m.dimension != c.dimension_) throw InputError("forest dimension mismatch");
      c.model_ = std::move(m);
    } else {
      PerceptronModel m = PerceptronModel::from_json(j.at("model"));
      if (m.dimension() != c.dimension_) throw InputError("perceptron dimension mismatch");
      c.model_ = std::move(m);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("invalid model JSON: {}", e.what()));
  } catch (const std::invalid_argument&) {
    throw InputError("invalid vectorizer fingerprint");
  }
}

void Classifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << to_json().dump() << '\n';
}

Classifier Classifier::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open model '{}'", path.string()));
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InputError(fmt::format("'{}' is not valid JSON", path.string()));
  return from_json(j);
}

}  // namespace tortured
