#include "tortured/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "tortured/error.hpp"

namespace tortured {
namespace {

void note(LexiconReport* report, std::string message) {
  if (report) report->diagnostics.push_back(std::move(message));
}

void strip_bom(std::string& line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::optional<std::vector<std::string>> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;

  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !quoted && field.empty()) {
      in_quotes = quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

Lexicon Lexicon::from_pairs(std::vector<PhrasePair> candidates,
                            LexiconReport* report) {
  Lexicon lexicon;
  std::set<Tokens> seen;

  for (auto& pair : candidates) {
    const auto bad_token = [](const Tokens& t) {
      return std::any_of(t.begin(), t.end(),
                         [](const std::string& s) { return s.empty(); });
    };
    if (pair.tortured.empty() || pair.expected.empty() ||
        bad_token(pair.tortured) || bad_token(pair.expected)) {
      if (report) ++report->malformed;
      note(report, fmt::format("{}: empty phrase", pair.source_id));
      continue;
    }
    if (pair.tortured.size() > kMaxPhraseTokens ||
        pair.expected.size() > kMaxPhraseTokens) {
      if (report) ++report->too_long;
      note(report, fmt::format("{}: phrase longer than {} tokens rejected",
                               pair.source_id, kMaxPhraseTokens));
      continue;
    }
    if (pair.tortured == pair.expected) {
      if (report) ++report->identical;
      note(report, fmt::format("{}: tortured phrase equals expected phrase",
                               pair.source_id));
      continue;
    }
    if (!seen.insert(pair.tortured).second) {
      if (report) ++report->duplicates;
      note(report, fmt::format("{}: duplicate tortured phrase '{}' dropped",
                               pair.source_id, join(pair.tortured)));
      continue;
    }

    const std::size_t index = lexicon.pairs_.size();
    lexicon.match_index_[pair.tortured.front()].push_back(index);
    lexicon.max_tortured_length_ =
        std::max(lexicon.max_tortured_length_, pair.tortured.size());
    lexicon.pairs_.push_back(std::move(pair));
  }

  if (report) report->accepted = lexicon.pairs_.size();
  if (lexicon.pairs_.empty()) {
    throw InputError("lexicon has no valid phrase pairs");
  }
  return lexicon;
}

const std::vector<std::size_t>& Lexicon::starting_with(
    const std::string& token) const {
  static const std::vector<std::size_t> kNone;
  const auto it = match_index_.find(token);
  return it == match_index_.end() ? kNone : it->second;
}

std::optional<std::size_t> Lexicon::find_tortured(const Tokens& tortured) const {
  if (tortured.empty()) return std::nullopt;
  for (std::size_t index : starting_with(tortured.front())) {
    if (pairs_[index].tortured == tortured) return index;
  }
  return std::nullopt;
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconReport* report) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open lexicon '{}'", path.string()));

  std::vector<PhrasePair> candidates;
  std::size_t malformed = 0;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line_no == 1) strip_bom(line);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      const auto header = parse_csv_line(line);
      if (header && header->size() >= 2 && normalize((*header)[0]) == Tokens{"tortured"} &&
          normalize((*header)[1]) == Tokens{"expected"}) {
        continue;
      }
      note(report, fmt::format("{}:1: missing 'tortured,expected' header; "
                               "treating first line as data",
                               path.filename().string()));
    }
    if (report) ++report->rows;

    const std::string where = fmt::format("{}:{}", path.filename().string(), line_no);
    const auto fields = parse_csv_line(line);
    if (!fields || fields->size() < 2) {
      ++malformed;
      note(report, fmt::format("{}: malformed row skipped", where));
      continue;
    }
    candidates.push_back({normalize((*fields)[0]), normalize((*fields)[1]), where});
  }
  if (in.bad()) throw InputError(fmt::format("error reading '{}'", path.string()));

  Lexicon lexicon = Lexicon::from_pairs(std::move(candidates), report);
  if (report) report->malformed += malformed;
  return lexicon;
}

std::vector<Occurrence> match_phrases(const Tokens& tokens,
                                      const Lexicon& lexicon) {
  std::vector<Occurrence> found;
  for (std::size_t offset = 0; offset < tokens.size(); ++offset) {
    for (std::size_t index : lexicon.starting_with(tokens[offset])) {
      const Tokens& phrase = lexicon[index].tortured;
      if (offset + phrase.size() > tokens.size()) continue;
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + offset)) {
        found.push_back({index, offset, phrase.size()});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Occurrence& a, const Occurrence& b) {
    return std::tie(a.offset, a.length, a.pair) < std::tie(b.offset, b.length, b.pair);
  });
  return found;
}

Paragraph make_paragraph(std::string id, std::string raw_text,
                         std::string source, const Lexicon& lexicon) {
  Paragraph p;
  p.id = std::move(id);
  p.tokens = normalize(raw_text);
  p.raw_text = std::move(raw_text);
  p.source = std::move(source);
  p.occurrences = match_phrases(p.tokens, lexicon);
  p.label = p.occurrences.empty() ? 0 : 1;
  return p;
}

std::vector<Paragraph> load_paragraphs(const std::filesystem::path& path,
                                       const Lexicon& lexicon,
                                       ParagraphReport* report) {
  using nlohmann::json;

  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open paragraphs '{}'", path.string()));

  std::vector<Paragraph> paragraphs;
  std::string line;
  std::size_t line_no = 0;
  const std::string name = path.filename().string();

  auto skip = [&](const std::string& why) {
    if (!report) return;
    ++report->malformed;
    report->diagnostics.push_back(fmt::format("{}:{}: {}", name, line_no, why));
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line_no == 1) strip_bom(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (report) ++report->lines;

    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!record.is_object()) {
      skip("not a JSON object");
      continue;
    }
    const auto id = record.find("id");
    const auto text = record.find("text");
    if (id == record.end() || !id->is_string() || text == record.end() ||
        !text->is_string()) {
      skip("missing string field 'id' or 'text'");
      continue;
    }
    std::string source;
    if (const auto it = record.find("source"); it != record.end()) {
      if (!it->is_string()) {
        skip("field 'source' is not a string");
        continue;
      }
      source = it->get<std::string>();
    }
    std::optional<int> file_label;
    if (const auto it = record.find("label"); it != record.end() && !it->is_null()) {
      if (!it->is_number_integer() || (it->get<int>() != 0 && it->get<int>() != 1)) {
        skip("field 'label' must be 0 or 1");
        continue;
      }
      file_label = it->get<int>();
    }

    Paragraph p = make_paragraph(id->get<std::string>(), text->get<std::string>(),
                                 std::move(source), lexicon);
    if (file_label && *file_label != p.label && report) {
      ++report->label_disagreements;
      report->diagnostics.push_back(
          fmt::format("{}:{}: paragraph '{}' labeled {} in file, {} by matching",
                      name, line_no, p.id, *file_label, p.label));
    }
    paragraphs.push_back(std::move(p));
  }
  if (in.bad()) throw InputError(fmt::format("error reading '{}'", path.string()));
  if (report) report->loaded = paragraphs.size();
  return paragraphs;
}

}  // namespace tortured
