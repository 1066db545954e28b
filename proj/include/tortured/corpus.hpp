#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tortured/text.hpp"

namespace tortured {

inline constexpr std::size_t kMaxPhraseTokens = 5;

// A tortured phrase and the fixed expression it replaces.
struct PhrasePair {
  Tokens tortured;
  Tokens expected;
  std::string source_id;
};

// What happened while building a lexicon. Rejected rows never abort
// loading; they are counted and described here.
struct LexiconReport {
  std::size_t rows = 0;
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::size_t too_long = 0;
  std::size_t malformed = 0;
  std::size_t identical = 0;  // tortured == expected
  std::vector<std::string> diagnostics;
};

class Lexicon {
 public:
  // Validates and de-duplicates `candidates`; the first occurrence of a
  // tortured sequence wins. Throws InputError when nothing survives.
  static Lexicon from_pairs(std::vector<PhrasePair> candidates,
                            LexiconReport* report = nullptr);

  const std::vector<PhrasePair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  const PhrasePair& operator[](std::size_t i) const { return pairs_[i]; }

  // Indices of pairs whose tortured phrase starts with `token`.
  const std::vector<std::size_t>& starting_with(const std::string& token) const;

  std::size_t max_tortured_length() const { return max_tortured_length_; }

  std::optional<std::size_t> find_tortured(const Tokens& tortured) const;

 private:
  std::vector<PhrasePair> pairs_;
  std::unordered_map<std::string, std::vector<std::size_t>> match_index_;
  std::size_t max_tortured_length_ = 0;
};

// CSV with header `tortured,expected`. Throws InputError on I/O failure or
// when no valid row remains.
Lexicon load_lexicon(const std::filesystem::path& path,
                     LexiconReport* report = nullptr);

struct Occurrence {
  std::size_t pair = 0;    // index into the lexicon
  std::size_t offset = 0;  // token offset
  std::size_t length = 0;  // token count

  bool operator==(const Occurrence&) const = default;
};

// Every contiguous occurrence of every tortured phrase, including
// overlapping and nested ones. Sorted by (offset, length, pair).
std::vector<Occurrence> match_phrases(const Tokens& tokens,
                                      const Lexicon& lexicon);

struct Paragraph {
  std::string id;
  std::string raw_text;
  Tokens tokens;
  int label = 0;
  std::vector<Occurrence> occurrences;
  std::string source;
};

// Normalizes and labels a single paragraph against `lexicon`.
Paragraph make_paragraph(std::string id, std::string raw_text,
                         std::string source, const Lexicon& lexicon);

struct ParagraphReport {
  std::size_t lines = 0;
  std::size_t loaded = 0;
  std::size_t malformed = 0;
  std::size_t label_disagreements = 0;
  std::vector<std::string> diagnostics;
};

// JSONL records {"id", "text", "source", "label"?}. Labels are always
// recomputed from matching; a disagreeing file label is reported.
std::vector<Paragraph> load_paragraphs(const std::filesystem::path& path,
                                       const Lexicon& lexicon,
                                       ParagraphReport* report = nullptr);

// Splits one CSV record into fields (RFC 4180 quoting, no embedded
// newlines). Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> parse_csv_line(const std::string& line);

}  // namespace tortured
