#include "tortured/text.hpp"

#include <cstdint>
#include <optional>

namespace tortured {
namespace {

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed
  bool valid;
};

Decoded decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1, true};

  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0, 1, false};
  }
  if (i + len > s.size()) return {0, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong forms and surrogates.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {0, 1, false};
  }
  return {cp, len, true};
}

bool is_letter(char32_t c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
  if (c >= 0xC0 && c <= 0x24F) return c != 0xD7 && c != 0xF7;
  if (c >= 0x386 && c <= 0x3FF) return c != 0x387;
  if (c >= 0x400 && c <= 0x481) return true;
  if (c >= 0x48A && c <= 0x52F) return true;
  return false;
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_word_char(char32_t c) { return is_letter(c) || is_digit(c); }

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  // Latin Extended-A: uppercase/lowercase alternate in pairs.
  if (c >= 0x100 && c <= 0x137) return c | 1;
  if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

}  // namespace

std::vector<TokenSpan> normalize_with_offsets(std::string_view text) {
  std::vector<TokenSpan> out;
  std::optional<TokenSpan> current;
  std::size_t i = 0;

  auto flush = [&] {
    if (current) out.push_back(std::move(*current));
    current.reset();
  };

  while (i < text.size()) {
    const Decoded d = decode(text, i);
    if (d.valid && is_word_char(d.cp)) {
      if (!current) current = TokenSpan{{}, i, i};
      append_utf8(current->token, to_lower(d.cp));
      current->end = i + d.length;
      i += d.length;
      continue;
    }
    // A lone hyphen joins two word characters.
    if (d.valid && d.cp == '-' && current && i + 1 < text.size()) {
      const Decoded next = decode(text, i + 1);
      if (next.valid && is_word_char(next.cp)) {
        current->token.push_back('-');
        i += 1;
        continue;
      }
    }
    flush();
    i += d.length;
  }
  flush();
  return out;
}

Tokens normalize(std::string_view text) {
  Tokens tokens;
  for (auto& span : normalize_with_offsets(text)) {
    tokens.push_back(std::move(span.token));
  }
  return tokens;
}

std::string join(const Tokens& tokens, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(separator);
    out.append(tokens[i]);
  }
  return out;
}

}  // namespace tortured
