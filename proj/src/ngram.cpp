#include "tortured/ngram.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "tortured/error.hpp"

namespace tortured {
namespace {

// Occurrences are sorted by (offset, length, pair), so the first contained
// one is the leftmost-then-shortest.
std::optional<std::size_t> first_contained(const std::vector<Occurrence>& occurrences,
                                           std::size_t start, std::size_t n) {
  for (const Occurrence& o : occurrences) {
    if (o.offset >= start && o.offset + o.length <= start + n) return o.pair;
  }
  return std::nullopt;
}

}  // namespace

std::vector<LabeledWindow> extract_windows(const Paragraph& paragraph,
                                           const Lexicon& lexicon,
                                           std::size_t n) {
  if (n == 0 || n < lexicon.max_tortured_length()) {
    throw ConfigError(fmt::format(
        "window size {} is smaller than the longest tortured phrase ({})", n,
        lexicon.max_tortured_length()));
  }
  std::vector<LabeledWindow> windows;
  const Tokens& tokens = paragraph.tokens;
  if (tokens.size() < n) return windows;

  const std::vector<Occurrence> occurrences = match_phrases(tokens, lexicon);
  windows.reserve(tokens.size() - n + 1);
  for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
    LabeledWindow w;
    w.tokens.assign(tokens.begin() + start, tokens.begin() + start + n);
    w.paragraph_id = paragraph.id;
    w.offset = start;
    w.matched_pair = first_contained(occurrences, start, n);
    w.label = w.matched_pair ? 1 : 0;
    windows.push_back(std::move(w));
  }
  return windows;
}

Dataset build_dataset(const std::vector<Paragraph>& paragraphs,
                      const Lexicon& lexicon, std::size_t n) {
  if (paragraphs.empty()) throw InputError("no paragraphs to build a dataset from");

  Dataset dataset;
  DatasetSummary& s = dataset.summary;
  s.paragraphs = paragraphs.size();
  for (const Paragraph& p : paragraphs) {
    if (p.tokens.size() < n) ++s.short_paragraphs;
    auto windows = extract_windows(p, lexicon, n);
    for (auto& w : windows) {
      if (w.label == 1) {
        ++s.positive;
      } else if (p.label == 1) {
        ++s.negative_in_positive_paragraphs;
      } else {
        ++s.negative_in_negative_paragraphs;
      }
      dataset.windows.push_back(std::move(w));
    }
  }
  s.total = dataset.windows.size();
  s.negative = s.total - s.positive;
  if (s.total == 0) {
    throw InputError(fmt::format(
        "dataset is empty: all {} paragraphs are shorter than {} tokens",
        s.paragraphs, n));
  }
  return dataset;
}

void write_dataset(const std::vector<LabeledWindow>& windows, std::ostream& out) {
  for (const LabeledWindow& w : windows) {
    nlohmann::ordered_json record;
    record["tokens"] = w.tokens;
    record["label"] = w.label;
    record["paragraph_id"] = w.paragraph_id;
    record["offset"] = w.offset;
    out << record.dump() << '\n';
  }
}

void write_dataset(const std::vector<LabeledWindow>& windows,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  write_dataset(windows, out);
  if (!out) throw InputError(fmt::format("error writing '{}'", path.string()));
}

std::vector<LabeledWindow> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open dataset '{}'", path.string()));

  std::vector<LabeledWindow> windows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      LabeledWindow w;
      w.tokens = record.at("tokens").get<Tokens>();
      w.label = record.at("label").get<int>();
      w.paragraph_id = record.at("paragraph_id").get<std::string>();
      w.offset = record.at("offset").get<std::size_t>();
      if (w.label != 0 && w.label != 1) throw InputError("label must be 0 or 1");
      if (w.tokens.empty()) throw InputError("empty token list");
      windows.push_back(std::move(w));
    } catch (const std::exception& e) {
      throw InputError(fmt::format("{}:{}: invalid dataset record: {}",
                                   path.string(), line_no, e.what()));
    }
  }
  if (windows.empty()) throw InputError(fmt::format("dataset '{}' is empty", path.string()));
  return windows;
}

std::size_t attach_provenance(std::vector<LabeledWindow>& windows,
                              const Lexicon& lexicon) {
  std::size_t disagreements = 0;
  for (LabeledWindow& w : windows) {
    const auto occurrences = match_phrases(w.tokens, lexicon);
    w.matched_pair = occurrences.empty()
                         ? std::nullopt
                         : std::optional<std::size_t>(occurrences.front().pair);
    const int label = w.matched_pair ? 1 : 0;
    if (label != w.label) ++disagreements;
  }
  return disagreements;
}

}  // namespace tortured
