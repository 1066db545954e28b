#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tortured/corpus.hpp"
#include "tortured/error.hpp"

namespace tortured {

enum class EmbeddingKind { Static, ContextualExport };

struct EmbeddingLoadReport {
  std::size_t lines = 0;
  std::size_t loaded = 0;
  std::size_t wrong_dimension = 0;
  std::size_t unparsable = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> diagnostics;

  std::size_t skipped() const { return wrong_dimension + unparsable + duplicates; }
};

// Token -> fixed-length vector, loaded from GloVe-style text.
class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dim, EmbeddingKind kind = EmbeddingKind::Static);

  // Returns false (and keeps the first vector) if `token` is already present.
  // Throws DimensionError on a wrong length or a non-finite entry.
  bool add(std::string token, std::span<const double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  EmbeddingKind kind() const { return kind_; }
  bool contains(const std::string& token) const { return rows_.contains(token); }
  // Empty span for out-of-vocabulary tokens.
  std::span<const double> lookup(const std::string& token) const;

 private:
  std::size_t dim_;
  EmbeddingKind kind_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> rows_;
};

/// Reads `<token> <f1> ... <fD>` lines. The dimension is taken from the
/// first well-formed line unless `expected_dim` is given. Lines with a
/// different number of values or unparsable numbers are skipped; repeated
/// tokens keep their first vector.
///
/// Throws InputError on I/O failure, when no line is usable, or when the
/// file's dimension contradicts `expected_dim`.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_dim = std::nullopt,
                               EmbeddingKind kind = EmbeddingKind::Static,
                               EmbeddingLoadReport* report = nullptr);

EmbeddingTable read_embeddings(std::istream& in, std::optional<std::size_t> expected_dim,
                               EmbeddingKind kind, EmbeddingLoadReport* report,
                               const std::string& name = "<stream>");

// dot(u, v) / (|u| |v|), or 0 when either norm is 0. Throws DimensionError
// on a length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

class PhraseLengthError : public Error {
 public:
  explicit PhraseLengthError(std::size_t length);
  std::size_t length() const { return length_; }

 private:
  std::size_t length_;
};

struct PhraseScore {
  std::array<std::string, 2> phrase;
  double score = 0.0;
  std::array<bool, 2> oov{false, false};

  bool both_oov() const { return oov[0] && oov[1]; }
};

// Cosine of the two token vectors; out-of-vocabulary tokens are the zero
// vector. Throws PhraseLengthError unless `phrase` has exactly two tokens.
PhraseScore score_phrase(const Tokens& phrase, const EmbeddingTable& table);

enum class PhraseKind { Tortured, Expected };

struct ScoredPhrase {
  std::size_t pair = 0;
  PhraseKind kind = PhraseKind::Tortured;
  PhraseScore score;
  bool retained = false;  // score > 0
};

struct ComparisonReport {
  std::vector<ScoredPhrase> rows;  // every two-token phrase that was scored
  std::vector<double> tortured_scores;  // retained, in lexicon order
  std::vector<double> expected_scores;
  std::optional<double> median_tortured;
  std::optional<double> median_expected;
  std::size_t discarded_tortured = 0;
  std::size_t discarded_expected = 0;
  std::size_t skipped_tortured = 0;  // not exactly two tokens
  std::size_t skipped_expected = 0;
  bool degenerate = false;  // fewer than 2 retained scores on either side

  std::size_t discarded_count() const { return discarded_tortured + discarded_expected; }
};

// Median of `values`; mean of the middle pair for even sizes.
std::optional<double> median(std::vector<double> values);

/// Scores the two-token tortured and expected phrases of every pair.
/// Scores <= 0 are discarded independently on each side before the
/// medians are taken.
ComparisonReport compare_lexicon(const Lexicon& lexicon, const EmbeddingTable& table);

// CSV `phrase,kind,score,oov_a,oov_b`, one row per scored phrase.
void write_comparison_csv(const ComparisonReport& report, std::ostream& out);
nlohmann::ordered_json comparison_summary(const ComparisonReport& report);

enum class Verdict { Tortured, NeedsReview, Legitimate };

std::string_view to_string(Verdict verdict);

inline constexpr double kDefaultThresholdLow = 0.12;
inline constexpr double kDefaultThresholdHigh = 0.30;

/// score < low -> Tortured, score > high -> Legitimate, otherwise
/// NeedsReview. Phrases with both tokens out of vocabulary always need
/// review. Throws ConfigError when low > high.
Verdict threshold_classify(const PhraseScore& score, double low = kDefaultThresholdLow,
                           double high = kDefaultThresholdHigh);

}  // namespace tortured
