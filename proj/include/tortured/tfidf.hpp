#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tortured/text.hpp"

namespace tortured {

// Sparse vector with strictly increasing indices.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  double norm() const;
  // Value at `index`, 0 if absent.
  double at(std::uint32_t index) const;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  // `terms` must be sorted and unique; `document_frequency` parallel to it.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency);

  std::size_t size() const { return terms_.size(); }
  const std::string& term(std::size_t index) const { return terms_[index]; }
  std::size_t document_frequency(std::size_t index) const { return df_[index]; }
  // Feature index of `term`, or -1.
  std::int64_t index_of(const std::string& term) const;

  // FNV-1a over the ordered term list; identifies a feature space.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
};

/// Smoothed TF-IDF: idf(t) = ln((1 + N) / (1 + df(t))) + 1, raw counts,
/// L2-normalized rows. Terms are indexed in lexicographic order.
class TfIdfModel {
 public:
  static constexpr int kFormatVersion = 1;

  // Throws InputError on an empty corpus.
  static TfIdfModel fit(std::span<const Tokens> documents);

  SparseVector transform(const Tokens& document) const;

  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t dimension() const { return vocabulary_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  double idf(std::size_t index) const { return idf_[index]; }

  // Identifies the fitted model: vocabulary, document frequencies and
  // corpus size (idf follows from those).
  std::uint64_t fingerprint() const;

  nlohmann::ordered_json to_json() const;
  // Throws VersionMismatch on an unknown format version and InputError on
  // inconsistent content.
  static TfIdfModel from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static TfIdfModel load(const std::filesystem::path& path);

 private:
  Vocabulary vocabulary_;
  std::vector<double> idf_;
  std::size_t n_docs_ = 0;
};

}  // namespace tortured
