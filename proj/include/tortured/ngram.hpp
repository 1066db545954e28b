#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tortured/corpus.hpp"

namespace tortured {

inline constexpr std::size_t kWindowSize = 5;

// A fixed-size token window and whether it fully contains a tortured phrase.
struct LabeledWindow {
  Tokens tokens;
  int label = 0;
  std::string paragraph_id;
  std::size_t offset = 0;
  std::optional<std::size_t> matched_pair;  // leftmost, then shortest phrase
};

/// All windows of `n` tokens (step 1) over the paragraph. A window is
/// positive iff some occurrence lies completely inside it. Paragraphs
/// shorter than `n` give no windows.
///
/// Throws ConfigError if `n` is smaller than the longest tortured phrase.
std::vector<LabeledWindow> extract_windows(const Paragraph& paragraph,
                                           const Lexicon& lexicon,
                                           std::size_t n = kWindowSize);

struct DatasetSummary {
  std::size_t paragraphs = 0;
  std::size_t short_paragraphs = 0;  // fewer tokens than the window size
  std::size_t total = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  // Negatives broken down by the label of the paragraph they came from.
  std::size_t negative_in_positive_paragraphs = 0;
  std::size_t negative_in_negative_paragraphs = 0;
};

struct Dataset {
  std::vector<LabeledWindow> windows;
  DatasetSummary summary;
};

// Windows of every paragraph in paragraph order, then offset order.
// Throws InputError on an empty paragraph list or an empty result.
Dataset build_dataset(const std::vector<Paragraph>& paragraphs,
                      const Lexicon& lexicon, std::size_t n = kWindowSize);

// JSONL: {"tokens": [...], "label": 0|1, "paragraph_id": str, "offset": int}
void write_dataset(const std::vector<LabeledWindow>& windows, std::ostream& out);
void write_dataset(const std::vector<LabeledWindow>& windows,
                   const std::filesystem::path& path);

// Malformed lines are fatal: a dataset is a produced artifact, not raw input.
std::vector<LabeledWindow> load_dataset(const std::filesystem::path& path);

// Recomputes matched_pair for every window from its tokens. Returns the
// number of windows whose stored label disagreed with the lexicon.
std::size_t attach_provenance(std::vector<LabeledWindow>& windows,
                              const Lexicon& lexicon);

}  // namespace tortured
