#include "tortured/scan.hpp"

#include <ostream>

#include <json.hpp>

#include "tortured/error.hpp"

namespace tortured {

ScanResult scan_document(std::string_view text, const TfIdfModel& vectorizer,
                         const Classifier& model, const EmbeddingTable* embeddings,
                         const ScanOptions& options) {
  model.check_compatible(vectorizer);
  if (options.window == 0) throw ConfigError("window size must be positive");
  if (!(options.threshold_low <= options.threshold_high)) {
    throw ConfigError("threshold-low must not exceed threshold-high");
  }

  const std::vector<TokenSpan> spans = normalize_with_offsets(text);
  ScanResult result;
  result.tokens = spans.size();
  if (spans.size() < options.window) {
    result.too_short = true;
    return result;
  }

  const std::size_t n = options.window;
  result.windows = spans.size() - n + 1;
  Tokens window(n);
  Finding* open = nullptr;
  for (std::size_t start = 0; start < result.windows; ++start) {
    for (std::size_t k = 0; k < n; ++k) window[k] = spans[start + k].token;
    const SparseVector x = vectorizer.transform(window);
    if (model.predict(x) != 1) continue;
    ++result.positive_windows;

    const double score = model.decision_score(x);
    if (open && start <= open->end) {
      open->end = start + n;
      open->decision_score += score;
      ++open->positive_windows;
    } else {
      result.findings.push_back({start, start + n, {}, score, 1, {}});
      open = &result.findings.back();
    }
  }

  for (Finding& f : result.findings) {
    f.decision_score /= static_cast<double>(f.positive_windows);
    const std::size_t begin = spans[f.start].begin;
    f.text = std::string(text.substr(begin, spans[f.end - 1].end - begin));
    if (!embeddings) continue;
    for (std::size_t i = f.start; i + 1 < f.end; ++i) {
      const PhraseScore s = score_phrase({spans[i].token, spans[i + 1].token}, *embeddings);
      f.bigram_verdicts.push_back({s.phrase, s.score, s.oov,
                                   threshold_classify(s, options.threshold_low,
                                                      options.threshold_high)});
    }
  }
  return result;
}

void write_findings(const std::vector<Finding>& findings, std::ostream& out) {
  for (const Finding& f : findings) {
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const BigramVerdict& b : f.bigram_verdicts) {
      verdicts.push_back({{"bigram", b.tokens[0] + " " + b.tokens[1]},
                          {"score", b.score},
                          {"oov", b.oov},
                          {"verdict", std::string(to_string(b.verdict))}});
    }
    nlohmann::ordered_json j;
    j["doc_offset_tokens"] = {f.start, f.end};
    j["text"] = f.text;
    j["decision_score"] = f.decision_score;
    j["bigram_verdicts"] = std::move(verdicts);
    out << j.dump() << '\n';
  }
}

}  // namespace tortured
