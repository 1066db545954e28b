// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails; optional checks print SKIP when their
// external inputs are not available.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tortured/embed.hpp"
#include "tortured/experiment.hpp"
#include "tortured/metrics.hpp"
#include "tortured/ngram.hpp"
#include "tortured/scan.hpp"
#include "tortured/tfidf.hpp"

using namespace tortured;

namespace {

struct Outcome {
  enum Status { Pass, Fail, Skip } status;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)};
}

// Fixture sizes and seeds are fixed here so every run sees the same data.
constexpr std::size_t kParagraphs = 200;
constexpr std::uint64_t kCorpusSeed = 2022;
constexpr std::uint64_t kSplitSeed = 7;

std::vector<LabeledWindow> windows_of(const fixtures::SyntheticCorpus& corpus,
                                      const Lexicon& lexicon) {
  return build_dataset(fixtures::paragraphs_of(corpus, lexicon), lexicon).windows;
}

ExperimentConfig config(ClassifierKind kind, SplitMode mode, std::uint64_t seed) {
  ExperimentConfig c;
  c.classifier = kind;
  c.split = {mode, 0.8, seed};
  c.seed = seed;
  return c;
}

Outcome five_gram_oracle() {
  const auto corpus = fixtures::separable_corpus(kParagraphs, kCorpusSeed);
  const Lexicon lexicon = fixtures::lexicon_of(corpus);
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = build_dataset(fixtures::paragraphs_of(corpus, lexicon), lexicon);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto oracle = oracles::count_windows(corpus);
  const bool counts = ds.summary.total == oracle.total && ds.summary.positive == oracle.positive &&
                      ds.summary.negative == oracle.negative;
  return verdict(counts && seconds < 5.0,
                 fmt::format("total/pos/neg {}/{}/{} vs oracle {}/{}/{}, {:.3f} s (limit 5 s)",
                             ds.summary.total, ds.summary.positive, ds.summary.negative,
                             oracle.total, oracle.positive, oracle.negative, seconds));
}

Outcome tfidf_oracle() {
  std::mt19937 rng(1234);
  const Tokens alphabet{"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
  double worst = 0.0;
  for (int round = 0; round < 1000; ++round) {
    std::vector<Tokens> docs(1 + rng() % 5);
    for (auto& d : docs) {
      for (std::size_t k = 1 + rng() % 8; k > 0; --k) d.push_back(alphabet[rng() % alphabet.size()]);
    }
    const auto model = TfIdfModel::fit(docs);
    const auto ref = oracles::fit_tfidf(docs);
    if (model.dimension() != ref.idf.size()) return verdict(false, "vocabulary size differs");
    for (const auto& [term, idf] : ref.idf) {
      const auto i = model.vocabulary().index_of(term);
      if (i < 0) return verdict(false, "term missing: " + term);
      worst = std::max(worst, std::abs(model.idf(static_cast<std::size_t>(i)) - idf));
    }
    for (const auto& doc : docs) {
      const auto v = model.transform(doc);
      const auto want = oracles::transform_tfidf(ref, doc);
      for (const auto& term : alphabet) {
        const auto i = model.vocabulary().index_of(term);
        const double got = i < 0 ? 0.0 : v.at(static_cast<std::uint32_t>(i));
        worst = std::max(worst, std::abs(got - (want.count(term) ? want.at(term) : 0.0)));
      }
    }
  }
  return verdict(worst <= 1e-9, fmt::format("1000 corpora of <= 5 documents, max abs diff {:.3g} "
                                            "(limit 1e-9)", worst));
}

Outcome classifier_sanity() {
  const auto corpus = fixtures::separable_corpus(kParagraphs, kCorpusSeed);
  const Lexicon lexicon = fixtures::lexicon_of(corpus);
  const auto windows = windows_of(corpus, lexicon);
  const auto forest = run_experiment(windows, nullptr,
                                     config(ClassifierKind::Forest, SplitMode::Random, kSplitSeed));
  const auto perceptron = run_experiment(
      windows, nullptr, config(ClassifierKind::Perceptron, SplitMode::Random, kSplitSeed));
  const double f = forest.report.metrics.accuracy;
  const double p = perceptron.report.metrics.accuracy;
  return verdict(f >= 0.90 && p >= 0.85 && f >= p,
                 fmt::format("random forest {:.4f} (>= 0.90), perceptron {:.4f} (>= 0.85), "
                             "forest >= perceptron: {}",
                             f, p, f >= p ? "yes" : "no"));
}

Outcome generalization_gap() {
  const auto corpus = fixtures::distinctive_corpus(kParagraphs, kCorpusSeed);
  const Lexicon lexicon = fixtures::lexicon_of(corpus);
  const auto windows = windows_of(corpus, lexicon);
  bool ok = true;
  std::string detail = "class-1 F1 random vs phrase-disjoint:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double random =
        run_experiment(windows, nullptr, config(ClassifierKind::Forest, SplitMode::Random, seed))
            .report.metrics.f1[1];
    const double disjoint =
        run_experiment(windows, &lexicon,
                       config(ClassifierKind::Forest, SplitMode::PhraseDisjoint, seed))
            .report.metrics.f1[1];
    ok = ok && disjoint < random;
    detail += fmt::format(" [{}] {:.3f}/{:.3f}", seed, random, disjoint);
  }
  return verdict(ok, detail);
}

// Held-out phrases can only be recognized if their words occur in other
// training phrases, as they do in real tortured-phrase lexicons; the
// compositional fixture has that structure.
Outcome balanced_split() {
  const auto corpus = fixtures::compositional_corpus(kParagraphs, kCorpusSeed);
  const Lexicon lexicon = fixtures::lexicon_of(corpus);
  const auto windows = windows_of(corpus, lexicon);
  const auto result = run_experiment(
      windows, &lexicon, config(ClassifierKind::Forest, SplitMode::BalancedPhraseDisjoint, kSplitSeed));
  const auto& s = result.report.stats;
  const auto& m = result.report.metrics;
  const double gap = std::abs(m.recall[0] - m.recall[1]);
  const bool equal = s.train_positive == s.train_negative && s.test_positive == s.test_negative;
  return verdict(equal && gap < 0.25,
                 fmt::format("train {}/{}, test {}/{}, recall(0) {:.3f}, recall(1) {:.3f}, "
                             "difference {:.3f} (limit < 0.25)",
                             s.train_negative, s.train_positive, s.test_negative, s.test_positive,
                             m.recall[0], m.recall[1], gap));
}

double tortured_share(const Lexicon& lexicon, const EmbeddingTable& table, double low, double high) {
  std::size_t tortured = 0, total = 0;
  for (const auto& pair : lexicon.pairs()) {
    if (pair.tortured.size() != 2) continue;
    ++total;
    tortured += threshold_classify(score_phrase(pair.tortured, table), low, high) == Verdict::Tortured;
  }
  return total == 0 ? 0.0 : static_cast<double>(tortured) / static_cast<double>(total);
}

Outcome cosine_separation() {
  const auto lexicon = load_lexicon(fixtures::data_dir() / "cosine_lexicon.csv");
  const auto table = load_embeddings(fixtures::data_dir() / "embeddings_fixture.txt", 10);
  const auto report = compare_lexicon(lexicon, table);
  if (!report.median_tortured || !report.median_expected) return verdict(false, "no medians");
  const double mt = *report.median_tortured, me = *report.median_expected;
  const double at_medians = tortured_share(lexicon, table, mt, me);
  const double mid = (mt + me) / 2;
  const double around_mid = tortured_share(lexicon, table, mid - 0.05, mid + 0.05);
  return verdict(me - mt >= 0.1 && at_medians >= 0.70 && around_mid >= 0.70,
                 fmt::format("median expected {:.4f}, tortured {:.4f}, margin {:.4f} (>= 0.1); "
                             "tortured share at medians {:.4f}, at midpoint +/- 0.05 {:.4f} (>= 0.70)",
                             me, mt, me - mt, at_medians, around_mid));
}

Outcome glove_integration() {
  const char* glove = std::getenv("TORTURED_GLOVE_PATH");
  const char* lexicon_path = std::getenv("TORTURED_LEXICON_PATH");
  if (!glove || !lexicon_path) {
    return {Outcome::Skip, "set TORTURED_GLOVE_PATH (glove.6B.200d.txt) and "
                           "TORTURED_LEXICON_PATH to run"};
  }
  const auto table = load_embeddings(glove, 200);
  const auto report = compare_lexicon(load_lexicon(lexicon_path), table);
  if (!report.median_tortured || !report.median_expected) return verdict(false, "no medians");
  const double mt = *report.median_tortured, me = *report.median_expected;
  const auto retained = report.tortured_scores.size();
  return verdict(std::abs(me - 0.30) <= 0.05 && std::abs(mt - 0.12) <= 0.05 &&
                     retained >= 134 && retained <= 144,
                 fmt::format("median expected {:.4f} (0.30 +/- 0.05), tortured {:.4f} "
                             "(0.12 +/- 0.05), retained tortured phrases {} (139 +/- 5)",
                             me, mt, retained));
}

Outcome metrics_oracle() {
  std::mt19937_64 rng(5150);
  double worst = 0.0;
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = 1 + rng() % 200;
    const unsigned bias = static_cast<unsigned>(rng() % 101);
    std::vector<int> pred(n), gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng() % 100 < bias ? 1 : 0;
      gold[i] = static_cast<int>(rng() % 2);
    }
    const auto m = compute_metrics(pred, gold);
    const auto o = oracles::scores(pred, gold);
    const auto c = oracles::confusion(pred, gold);
    worst = std::max({worst, std::abs(m.accuracy - o.accuracy),
                      std::abs(static_cast<double>(m.confusion.tp) - c.tp),
                      std::abs(static_cast<double>(m.confusion.fp) - c.fp),
                      std::abs(static_cast<double>(m.confusion.tn) - c.tn),
                      std::abs(static_cast<double>(m.confusion.fn) - c.fn)});
    for (int k = 0; k < 2; ++k) {
      worst = std::max({worst, std::abs(m.precision[k] - o.precision[k]),
                        std::abs(m.recall[k] - o.recall[k]), std::abs(m.f1[k] - o.f1[k])});
    }
  }
  return verdict(worst <= 1e-12,
                 fmt::format("1000 random vectors, max abs diff {:.3g} (limit 1e-12)", worst));
}

Outcome end_to_end_scan() {
  const auto corpus = fixtures::separable_corpus(kParagraphs, kCorpusSeed);
  const Lexicon lexicon = fixtures::lexicon_of(corpus);
  const auto trained = run_experiment(windows_of(corpus, lexicon), nullptr,
                                      config(ClassifierKind::Forest, SplitMode::Random, kSplitSeed));

  const std::string planted = fixtures::clean_text(25, 91) +
                              " In this work a counterfeit consciousness agent is trained. " +
                              fixtures::clean_text(25, 92);
  const Tokens tokens = normalize(planted);
  const auto at = static_cast<std::size_t>(
      std::find(tokens.begin(), tokens.end(), "counterfeit") - tokens.begin());
  const auto hit = scan_document(planted, trained.vectorizer, trained.model);
  const bool overlaps = std::any_of(hit.findings.begin(), hit.findings.end(), [&](const Finding& f) {
    return f.start < at + 2 && at < f.end;
  });
  const auto clean = scan_document(fixtures::clean_text(60, 93), trained.vectorizer, trained.model);
  return verdict(overlaps && clean.findings.empty(),
                 fmt::format("planted document: {} finding(s), overlap with plant {}; "
                             "clean document: {} finding(s)",
                             hit.findings.size(), overlaps ? "yes" : "no", clean.findings.size()));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"five-gram oracle equivalence", five_gram_oracle},
      {"tf-idf numeric oracle", tfidf_oracle},
      {"classifier sanity", classifier_sanity},
      {"generalization gap", generalization_gap},
      {"balanced split", balanced_split},
      {"cosine separation", cosine_separation},
      {"cosine separation, public embeddings (optional)", glove_integration},
      {"metrics oracle", metrics_oracle},
      {"end-to-end scan", end_to_end_scan},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    failures += o.status == Outcome::Fail;
    std::cout << fmt::format("{}  {}: {}\n", tag, name, o.detail) << std::flush;
  }
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : fmt::format("{} criteria failed\n", failures));
  return failures == 0 ? 0 : 1;
}
