#include "tortured/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace tortured {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size() && std::isfinite(out);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, EmbeddingKind kind) : dim_(dim), kind_(kind) {
  if (dim == 0) throw DimensionError("embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw DimensionError(fmt::format("vector for '{}' has {} values, expected {}", token,
                                     vector.size(), dim_));
  }
  if (!std::all_of(vector.begin(), vector.end(), [](double v) { return std::isfinite(v); })) {
    throw DimensionError(fmt::format("vector for '{}' is not finite", token));
  }
  if (rows_.contains(token)) return false;
  rows_.emplace(std::move(token), rows_.size());
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::span<const double> EmbeddingTable::lookup(const std::string& token) const {
  const auto it = rows_.find(token);
  if (it == rows_.end()) return {};
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

EmbeddingTable read_embeddings(std::istream& in, std::optional<std::size_t> expected_dim,
                               EmbeddingKind kind, EmbeddingLoadReport* report,
                               const std::string& name) {
  EmbeddingLoadReport local;
  EmbeddingLoadReport& r = report ? *report : local;

  std::optional<EmbeddingTable> table;
  if (expected_dim) table.emplace(*expected_dim, kind);

  std::string line;
  std::vector<double> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    ++r.lines;

    values.clear();
    bool ok = fields.size() >= 2;
    for (std::size_t k = 1; ok && k < fields.size(); ++k) {
      double v = 0.0;
      ok = parse_double(fields[k], v);
      values.push_back(v);
    }
    if (!ok) {
      ++r.unparsable;
      r.diagnostics.push_back(fmt::format("{}:{}: unparsable vector, line skipped", name, line_no));
      continue;
    }
    if (!table) {
      table.emplace(values.size(), kind);
    } else if (values.size() != table->dim()) {
      if (r.loaded == 0 && expected_dim) {
        throw InputError(fmt::format("{}: vectors have {} values but {} were expected", name,
                                     values.size(), *expected_dim));
      }
      ++r.wrong_dimension;
      r.diagnostics.push_back(fmt::format("{}:{}: {} values instead of {}, line skipped", name,
                                          line_no, values.size(), table->dim()));
      continue;
    }
    if (table->add(std::string(fields[0]), values)) {
      ++r.loaded;
    } else {
      ++r.duplicates;
      r.diagnostics.push_back(
          fmt::format("{}:{}: duplicate token '{}' ignored", name, line_no, fields[0]));
    }
  }
  if (in.bad()) throw InputError(fmt::format("error reading '{}'", name));
  if (!table || table->size() == 0) {
    throw InputError(fmt::format("'{}' contains no usable embedding", name));
  }
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_dim, EmbeddingKind kind,
                               EmbeddingLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open embeddings '{}'", path.string()));
  return read_embeddings(in, expected_dim, kind, report, path.filename().string());
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionError(fmt::format("cosine of vectors of length {} and {}", u.size(), v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

PhraseLengthError::PhraseLengthError(std::size_t length)
    : Error(fmt::format("only two-token phrases can be scored (got {})", length)),
      length_(length) {}

PhraseScore score_phrase(const Tokens& phrase, const EmbeddingTable& table) {
  if (phrase.size() != 2) throw PhraseLengthError(phrase.size());
  PhraseScore s;
  s.phrase = {phrase[0], phrase[1]};
  const auto a = table.lookup(phrase[0]);
  const auto b = table.lookup(phrase[1]);
  s.oov = {a.empty(), b.empty()};
  // A zero-padded token makes the cosine 0.
  s.score = (a.empty() || b.empty()) ? 0.0 : cosine(a, b);
  return s;
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

ComparisonReport compare_lexicon(const Lexicon& lexicon, const EmbeddingTable& table) {
  ComparisonReport report;
  for (std::size_t i = 0; i < lexicon.size(); ++i) {
    const PhrasePair& pair = lexicon[i];
    for (const PhraseKind kind : {PhraseKind::Tortured, PhraseKind::Expected}) {
      const bool tortured = kind == PhraseKind::Tortured;
      const Tokens& phrase = tortured ? pair.tortured : pair.expected;
      if (phrase.size() != 2) {
        ++(tortured ? report.skipped_tortured : report.skipped_expected);
        continue;
      }
      ScoredPhrase row{i, kind, score_phrase(phrase, table), false};
      row.retained = row.score.score > 0.0;
      if (row.retained) {
        (tortured ? report.tortured_scores : report.expected_scores).push_back(row.score.score);
      } else {
        ++(tortured ? report.discarded_tortured : report.discarded_expected);
      }
      report.rows.push_back(std::move(row));
    }
  }
  report.median_tortured = median(report.tortured_scores);
  report.median_expected = median(report.expected_scores);
  report.degenerate = report.tortured_scores.size() < 2 || report.expected_scores.size() < 2;
  return report;
}

void write_comparison_csv(const ComparisonReport& report, std::ostream& out) {
  out << "phrase,kind,score,oov_a,oov_b\n";
  for (const ScoredPhrase& row : report.rows) {
    const auto& s = row.score;
    out << csv_field(s.phrase[0] + " " + s.phrase[1]) << ','
        << (row.kind == PhraseKind::Tortured ? "tortured" : "expected") << ','
        << fmt::format("{:.9g}", s.score) << ',' << (s.oov[0] ? 1 : 0) << ','
        << (s.oov[1] ? 1 : 0) << '\n';
  }
}

nlohmann::ordered_json comparison_summary(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["median_tortured"] = optional_number(report.median_tortured);
  j["median_expected"] = optional_number(report.median_expected);
  j["retained_tortured"] = report.tortured_scores.size();
  j["retained_expected"] = report.expected_scores.size();
  j["discarded_tortured"] = report.discarded_tortured;
  j["discarded_expected"] = report.discarded_expected;
  j["skipped_tortured"] = report.skipped_tortured;
  j["skipped_expected"] = report.skipped_expected;
  j["scored_rows"] = report.rows.size();
  j["degenerate"] = report.degenerate;
  return j;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Tortured: return "tortured";
    case Verdict::Legitimate: return "legitimate";
    case Verdict::NeedsReview: break;
  }
  return "needs-review";
}

Verdict threshold_classify(const PhraseScore& score, double low, double high) {
  if (!(low <= high)) {
    throw ConfigError(fmt::format("threshold-low {} exceeds threshold-high {}", low, high));
  }
  if (score.both_oov()) return Verdict::NeedsReview;
  if (score.score < low) return Verdict::Tortured;
  if (score.score > high) return Verdict::Legitimate;
  return Verdict::NeedsReview;
}

}  // namespace tortured
