#pragma once

// Synthetic corpora for tests. The generator records the exact word
// sequence of every paragraph, so oracles can work from it without going
// through the library's tokenizer.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tortured/corpus.hpp"

namespace fixtures {

struct SyntheticParagraph {
  std::string id;
  std::vector<std::string> words;  // lowercase, as the tokenizer should see them
  std::string text;                // rendered with case and punctuation
  std::vector<std::size_t> planted;  // pair indices inserted on purpose
};

struct SyntheticCorpus {
  std::vector<std::pair<std::string, std::string>> pairs;  // tortured, expected
  std::vector<SyntheticParagraph> paragraphs;

  std::size_t planted_paragraphs() const;
};

// Tortured phrases from the bundled lexicon, planted in background text;
// tortured words never occur in the background. About 40% of paragraphs
// carry one or two phrases; some negatives carry an expected phrase.
SyntheticCorpus separable_corpus(std::size_t n_paragraphs, std::uint64_t seed);

// Every phrase is (distinctive word, common background word), and each
// distinctive word belongs to exactly one phrase.
SyntheticCorpus distinctive_corpus(std::size_t n_paragraphs, std::uint64_t seed);

// Two-word phrases drawn from a small shared tortured vocabulary, so every
// tortured word occurs in several phrases.
SyntheticCorpus compositional_corpus(std::size_t n_paragraphs, std::uint64_t seed);

// Background-only text of about `n_words` words.
std::string clean_text(std::size_t n_words, std::uint64_t seed);

tortured::Lexicon lexicon_of(const SyntheticCorpus& corpus);
std::vector<tortured::Paragraph> paragraphs_of(const SyntheticCorpus& corpus,
                                               const tortured::Lexicon& lexicon);

void write_lexicon_csv(const SyntheticCorpus& corpus, const std::filesystem::path& path);
void write_paragraphs_jsonl(const SyntheticCorpus& corpus, const std::filesystem::path& path);

std::filesystem::path data_dir();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace fixtures
