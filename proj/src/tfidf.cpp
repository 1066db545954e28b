#include "tortured/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "tortured/error.hpp"

namespace tortured {
namespace {

double smooth_idf(std::size_t n_docs, std::size_t df) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

}  // namespace

double SparseVector::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

double SparseVector::at(std::uint32_t index) const {
  const auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return 0.0;
  return values[static_cast<std::size_t>(it - indices.begin())];
}

Vocabulary::Vocabulary(std::vector<std::string> terms,
                       std::vector<std::size_t> document_frequency)
    : terms_(std::move(terms)), df_(std::move(document_frequency)) {
  lookup_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    lookup_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::int64_t Vocabulary::index_of(const std::string& term) const {
  const auto it = lookup_.find(term);
  return it == lookup_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

void fnv_mix(std::uint64_t& h, unsigned char c) {
  h ^= c;
  h *= 0x100000001b3ULL;
}

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) fnv_mix(h, static_cast<unsigned char>(v >> (8 * i)));
}

}  // namespace

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& t : terms_) {
    for (char c : t) fnv_mix(h, static_cast<unsigned char>(c));
    fnv_mix(h, static_cast<unsigned char>(0));
  }
  return h;
}

std::uint64_t TfIdfModel::fingerprint() const {
  std::uint64_t h = vocabulary_.fingerprint();
  fnv_mix(h, static_cast<std::uint64_t>(n_docs_));
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    fnv_mix(h, static_cast<std::uint64_t>(vocabulary_.document_frequency(i)));
  }
  return h;
}

TfIdfModel TfIdfModel::fit(std::span<const Tokens> documents) {
  if (documents.empty()) throw InputError("cannot fit TF-IDF on an empty corpus");

  std::map<std::string, std::size_t> df;
  for (const Tokens& doc : documents) {
    const std::set<std::string> distinct(doc.begin(), doc.end());
    for (const auto& term : distinct) ++df[term];
  }

  std::vector<std::string> terms;
  std::vector<std::size_t> counts;
  terms.reserve(df.size());
  counts.reserve(df.size());
  for (auto& [term, count] : df) {
    terms.push_back(term);
    counts.push_back(count);
  }

  TfIdfModel model;
  model.n_docs_ = documents.size();
  model.idf_.reserve(counts.size());
  for (std::size_t c : counts) model.idf_.push_back(smooth_idf(model.n_docs_, c));
  model.vocabulary_ = Vocabulary(std::move(terms), std::move(counts));
  return model;
}

SparseVector TfIdfModel::transform(const Tokens& document) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& token : document) {
    const std::int64_t index = vocabulary_.index_of(token);
    if (index >= 0) counts[static_cast<std::uint32_t>(index)] += 1.0;
  }

  SparseVector v;
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  double sum = 0.0;
  for (const auto& [index, count] : counts) {
    const double weight = count * idf_[index];
    v.indices.push_back(index);
    v.values.push_back(weight);
    sum += weight * weight;
  }
  if (sum > 0.0) {
    const double norm = std::sqrt(sum);
    for (double& value : v.values) value /= norm;
  }
  return v;
}

nlohmann::ordered_json TfIdfModel::to_json() const {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    nlohmann::ordered_json t;
    t["term"] = vocabulary_.term(i);
    t["index"] = i;
    t["df"] = vocabulary_.document_frequency(i);
    t["idf"] = idf_[i];
    terms.push_back(std::move(t));
  }
  nlohmann::ordered_json j;
  j["version"] = kFormatVersion;
  j["n_docs"] = n_docs_;
  j["terms"] = std::move(terms);
  return j;
}

TfIdfModel TfIdfModel::from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw VersionMismatch(fmt::format("vectorizer format version {} (expected {})",
                                        version, kFormatVersion));
    }
    TfIdfModel model;
    model.n_docs_ = j.at("n_docs").get<std::size_t>();
    const auto& entries = j.at("terms");
    std::vector<std::string> terms(entries.size());
    std::vector<std::size_t> df(entries.size());
    model.idf_.assign(entries.size(), 0.0);
    std::vector<bool> filled(entries.size(), false);
    for (const auto& e : entries) {
      const auto index = e.at("index").get<std::size_t>();
      if (index >= entries.size() || filled[index]) {
        throw InputError(fmt::format("bad term index {}", index));
      }
      filled[index] = true;
      terms[index] = e.at("term").get<std::string>();
      df[index] = e.at("df").get<std::size_t>();
      model.idf_[index] = e.at("idf").get<double>();
      if (df[index] < 1 || !std::isfinite(model.idf_[index])) {
        throw InputError(fmt::format("bad statistics for term '{}'", terms[index]));
      }
    }
    if (!std::is_sorted(terms.begin(), terms.end()) ||
        std::adjacent_find(terms.begin(), terms.end()) != terms.end()) {
      throw InputError("vectorizer terms are not sorted and unique");
    }
    model.vocabulary_ = Vocabulary(std::move(terms), std::move(df));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("invalid vectorizer JSON: {}", e.what()));
  }
}

void TfIdfModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << to_json().dump(1) << '\n';
}

TfIdfModel TfIdfModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open vectorizer '{}'", path.string()));
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InputError(fmt::format("'{}' is not valid JSON", path.string()));
  return from_json(j);
}

}  // namespace tortured
