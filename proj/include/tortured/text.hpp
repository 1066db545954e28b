#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tortured {

using Tokens = std::vector<std::string>;

// A token together with the byte range it was read from.
struct TokenSpan {
  std::string token;
  std::size_t begin = 0;  // byte offset into the source text
  std::size_t end = 0;    // one past the last byte
};

/// Splits text into lowercase tokens.
///
/// A token is a maximal run of letters and digits, where a single hyphen
/// between two such characters is kept ("state-of-the-art"). Everything
/// else separates tokens. Input is decoded as UTF-8; invalid bytes are
/// treated as separators. Letters are ASCII plus the Latin-1, Latin
/// Extended-A/B, Greek and Cyrillic blocks, with simple case folding.
Tokens normalize(std::string_view text);

// Same tokenization, keeping source byte offsets.
std::vector<TokenSpan> normalize_with_offsets(std::string_view text);

std::string join(const Tokens& tokens, std::string_view separator = " ");

}  // namespace tortured
