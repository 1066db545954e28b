#include <doctest.h>

#include <cctype>
#include <random>
#include <string>

#include "tortured/text.hpp"

using tortured::normalize;
using tortured::Tokens;

namespace {

// Straightforward restatement of the rule for ASCII input: runs of
// alphanumerics, with a hyphen kept only between two alphanumerics.
Tokens reference_tokenize(const std::string& s) {
  Tokens out;
  std::string cur;
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (alnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (c == '-' && !cur.empty() && i + 1 < s.size() && alnum(s[i + 1])) {
      cur.push_back('-');
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_SUITE("text") {
  TEST_CASE("lowercases and strips punctuation") {
    CHECK(normalize("Naive Bayes,") == Tokens{"naive", "bayes"});
    CHECK(normalize("").empty());
    CHECK(normalize("  ,;. ").empty());
  }

  TEST_CASE("keeps internal hyphens only") {
    CHECK(normalize("state-of-the-art AI (2021)") == Tokens{"state-of-the-art", "ai", "2021"});
    CHECK(normalize("-lead trail- a--b") == Tokens{"lead", "trail", "a", "b"});
    CHECK(normalize("x-1") == Tokens{"x-1"});
  }

  TEST_CASE("matches the character-class reference on random ASCII") {
    std::mt19937 rng(7);
    const std::string alphabet = "aZ9-- ,.'()\t\nQb";
    for (int round = 0; round < 2000; ++round) {
      std::string s;
      const int len = static_cast<int>(rng() % 40);
      for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
      CAPTURE(s);
      CHECK(normalize(s) == reference_tokenize(s));
    }
  }

  TEST_CASE("idempotent on its joined output") {
    std::mt19937 rng(11);
    const std::string alphabet = "abcXYZ019- ,.;:!?\"'";
    for (int round = 0; round < 500; ++round) {
      std::string s;
      for (int i = 0; i < 30; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
      const Tokens once = normalize(s);
      CHECK(normalize(tortured::join(once)) == once);
    }
  }

  TEST_CASE("decodes UTF-8 letters and folds case") {
    CHECK(normalize("Ÿ Ésprit Über naïve") == Tokens{"ÿ", "ésprit", "über", "naïve"});
    CHECK(normalize("ΑΒΓ Москва") == Tokens{"αβγ", "москва"});
    // Invalid bytes separate tokens instead of being copied through.
    CHECK(normalize(std::string("ab\xff" "cd")) == Tokens{"ab", "cd"});
    // Non-letters such as the multiplication sign are separators.
    CHECK(normalize("3×4") == Tokens{"3", "4"});
  }

  TEST_CASE("offsets point back into the source") {
    const std::string text = "An Über-model, here.";
    const auto spans = tortured::normalize_with_offsets(text);
    REQUIRE(spans.size() == 3);
    CHECK(text.substr(spans[1].begin, spans[1].end - spans[1].begin) == "Über-model");
    CHECK(spans[1].token == "über-model");
    CHECK(text.substr(spans[2].begin, spans[2].end - spans[2].begin) == "here");
  }
}
