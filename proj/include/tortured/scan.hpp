#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tortured/classifier.hpp"
#include "tortured/embed.hpp"
#include "tortured/ngram.hpp"
#include "tortured/tfidf.hpp"

namespace tortured {

struct BigramVerdict {
  std::array<std::string, 2> tokens;
  double score = 0.0;
  std::array<bool, 2> oov{false, false};
  Verdict verdict = Verdict::NeedsReview;
};

// A maximal run of overlapping or touching positive windows.
struct Finding {
  std::size_t start = 0;  // first token
  std::size_t end = 0;    // one past the last token
  std::string text;       // source text covered by the span
  double decision_score = 0.0;  // mean over the span's positive windows
  std::size_t positive_windows = 0;
  std::vector<BigramVerdict> bigram_verdicts;
};

struct ScanOptions {
  std::size_t window = kWindowSize;
  double threshold_low = kDefaultThresholdLow;
  double threshold_high = kDefaultThresholdHigh;
};

struct ScanResult {
  std::vector<Finding> findings;  // sorted by position
  std::size_t tokens = 0;
  std::size_t windows = 0;
  std::size_t positive_windows = 0;
  bool too_short = false;  // fewer tokens than one window
};

/// Classifies every window of the normalized document and merges positive
/// windows into spans. When `embeddings` is given, each adjacent token pair
/// inside a span also gets a cosine verdict.
ScanResult scan_document(std::string_view text, const TfIdfModel& vectorizer,
                         const Classifier& model, const EmbeddingTable* embeddings = nullptr,
                         const ScanOptions& options = {});

// One JSON object per finding:
// {"doc_offset_tokens": [start, end], "text", "decision_score", "bigram_verdicts"}
void write_findings(const std::vector<Finding>& findings, std::ostream& out);

}  // namespace tortured
