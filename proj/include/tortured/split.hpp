#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tortured/corpus.hpp"
#include "tortured/ngram.hpp"

namespace tortured {

enum class SplitMode { Random, PhraseDisjoint, BalancedPhraseDisjoint };

std::string_view to_string(SplitMode mode);
// "random", "phrase-disjoint", "balanced-phrase-disjoint"
SplitMode parse_split_mode(std::string_view name);

struct SplitSpec {
  SplitMode mode = SplitMode::Random;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

// Indices into the split dataset.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// round(fraction * n), halves rounded up.
std::size_t train_size(std::size_t n, double fraction);

// Seeded shuffle, then the first train_size(n) items train. Throws
// ConfigError on a fraction outside (0, 1) and InputError when either
// side would be empty.
Split split_random(std::size_t n, double train_fraction, std::uint64_t seed);

struct PhraseDisjointSplit {
  Split split;
  // Lexicon pair indices whose positives went to each side.
  std::vector<std::size_t> train_phrases;
  std::vector<std::size_t> test_phrases;
};

/// Partitions the tortured phrases so that no phrase contained in a test
/// positive is contained in any training positive. Phrases that share a
/// window are kept together. Groups are assigned largest first (ties in
/// seeded order) to whichever side keeps the training share of positives
/// closest to `train_fraction`. Negatives are split at random at the same
/// fraction. Indices come back in dataset order.
///
/// Throws InputError when fewer than two phrase groups exist.
PhraseDisjointSplit split_phrase_disjoint(std::span<const LabeledWindow> windows,
                                          const Lexicon& lexicon, double train_fraction,
                                          std::uint64_t seed);

// Downsamples the majority class of `indices` (labels looked up in
// `labels`) to the minority count, then shuffles. Throws InputError if a
// class is missing.
std::vector<std::size_t> balance(std::span<const std::size_t> indices,
                                 std::span<const int> labels, std::uint64_t seed);

// Applies `spec` to a window dataset. `lexicon` is required for the
// phrase-disjoint modes.
Split make_split(std::span<const LabeledWindow> windows, const Lexicon* lexicon,
                 const SplitSpec& spec);

}  // namespace tortured
