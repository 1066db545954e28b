#include "fixtures.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace fixtures {
namespace {

const std::vector<std::pair<std::string, std::string>> kTorturedPairs = {
    {"innocent bayes", "naive bayes"},
    {"ghostly grouping", "spectral clustering"},
    {"unused britain", "new england"},
    {"joined together states", "united states"},
    {"immature nations", "developing countries"},
    {"counterfeit consciousness", "artificial intelligence"},
    {"profound learning", "deep learning"},
    {"irregular woodland", "random forest"},
    {"colossal information", "big data"},
    {"bosom peril", "breast cancer"},
    {"flag to commotion", "signal to noise"},
    {"haphazardly get to memory", "random access memory"},
    {"choice tree", "decision tree"},
    {"bolster vector machine", "support vector machine"},
    {"neural organization", "neural network"},
    {"profound neural organization", "deep neural network"},
    {"fake neural organization", "artificial neural network"},
    {"straight relapse", "linear regression"},
    {"calculated relapse", "logistic regression"},
    {"mean square blunder", "mean square error"},
    {"worldwide situating framework", "global positioning system"},
    {"remote sensor organization", "wireless sensor network"},
    {"cloud figuring", "cloud computing"},
    {"enormous information", "big data"},
    {"vitality utilization", "energy consumption"},
    {"sign handling", "signal processing"},
    {"picture preparing", "image processing"},
    {"discourse acknowledgment", "speech recognition"},
    {"normal language preparing", "natural language processing"},
    {"slope plunge", "gradient descent"},
    {"bunch examination", "cluster analysis"},
    {"molecule swarm enhancement", "particle swarm optimization"},
    {"hereditary calculation", "genetic algorithm"},
    {"haze figuring", "fog computing"},
    {"savvy lattice", "smart grid"},
};

// Ordinary scientific prose. Contains no token of any tortured phrase
// above except "to".
const std::vector<std::string> kBackground = {
    "the",        "a",          "we",          "our",        "this",       "that",
    "is",         "are",        "was",         "were",       "be",         "in",
    "on",         "for",        "with",        "by",         "from",       "and",
    "or",         "as",         "at",         "to",         "it",         "these",
    "propose",    "present",    "method",      "approach",   "results",    "show",
    "model",      "models",     "data",        "dataset",    "experiments", "evaluate",
    "performance", "accuracy",  "baseline",    "proposed",   "paper",      "study",
    "analysis",   "compared",   "improves",    "significant", "training",  "test",
    "samples",    "features",   "parameters",  "error",      "rate",       "system",
    "design",     "efficient",  "robust",      "framework",  "algorithm",  "network",
    "optimization", "measured", "observed",    "reported",   "table",      "figure",
    "section",    "previous",   "work",        "recent",     "novel",      "simple",
    "standard",   "large",      "small",       "high",       "low",        "higher",
    "lower",      "number",     "set",         "each",       "all",        "several",
    "different",  "various",    "used",        "using",      "based",      "between",
    "among",      "under",      "over",        "while",      "when",       "which",
    "can",        "may",        "also",        "however",    "therefore",  "thus",
    "state-of-the-art", "2021", "three",       "five",       "first",      "second",
    "final",      "time",       "cost",        "computation", "energy",    "signal",
    "image",      "speech",     "text",        "graph",      "nodes",      "edges",
    "users",      "devices",    "sensors",     "clinical",   "patients",   "benchmark",
    "validation", "protocol",   "metric",      "metrics",    "scores",     "labels",
    "classes",    "class",      "output",      "input",      "layer",      "layers",
    "weights",    "loss",       "function",    "values",     "methods",   "setting",
};

const std::vector<std::string> kDistinctive = {
    "innocent",   "ghostly",    "counterfeit", "colossal",  "bosom",      "haphazardly",
    "bolster",    "worldwide",  "enormous",    "vitality",  "discourse",  "slope",
    "molecule",   "hereditary", "haze",        "savvy",     "immature",   "irregular",
    "profound",   "fake",       "straight",    "calculated", "remote",    "picture",
    "sign",       "bunch",      "normal",      "flag",      "choice",     "unused",
};

const std::vector<std::string> kDistinctivePartners = {
    "model", "data", "method", "network", "analysis", "system", "signal", "image",
    "graph", "function",
};

// Tortured vocabulary for phrases that share words with each other.
const std::vector<std::string> kModifiers = {
    "innocent", "ghostly",  "counterfeit", "profound", "irregular", "colossal",
    "bolster",  "straight", "calculated",  "enormous", "savvy",     "haze",
};

const std::vector<std::string> kHeads = {
    "bayes",   "grouping", "consciousness", "woodland",    "information",
    "relapse", "figuring", "organization",  "examination", "lattice",
};

using Engine = std::mt19937_64;

std::size_t draw(Engine& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool chance(Engine& rng, unsigned percent) { return rng() % 100 < percent; }

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> background(Engine& rng, std::size_t n) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back(kBackground[draw(rng, kBackground.size())]);
  return words;
}

using Chunks = std::vector<std::vector<std::string>>;

// Phrases go in between chunks, so a later insertion never splits an
// earlier one.
void insert_chunk(Chunks& chunks, Engine& rng, std::vector<std::string> phrase) {
  const auto at = static_cast<std::ptrdiff_t>(draw(rng, chunks.size() + 1));
  chunks.insert(chunks.begin() + at, std::move(phrase));
}

// Sentence case, commas, full stops and the odd parenthesis. None of this
// changes the token sequence.
std::string render(const std::vector<std::string>& words, Engine& rng) {
  std::string text;
  bool sentence_start = true;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string w = words[i];
    if (sentence_start && std::isalpha(static_cast<unsigned char>(w[0]))) {
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    }
    sentence_start = false;
    text += w;
    if (i + 1 == words.size()) {
      text += ".";
    } else if (chance(rng, 6)) {
      text += ". ";
      sentence_start = true;
    } else if (chance(rng, 8)) {
      text += ", ";
    } else if (chance(rng, 3)) {
      text += " (";
      text += words[++i];
      text += ") ";
    } else {
      text += " ";
    }
  }
  return text;
}

SyntheticCorpus generate(const std::vector<std::pair<std::string, std::string>>& pairs,
                         std::size_t n_paragraphs, std::uint64_t seed, unsigned positive_percent,
                         unsigned expected_percent, unsigned double_percent) {
  Engine rng(seed);
  SyntheticCorpus corpus;
  corpus.pairs = pairs;
  for (std::size_t p = 0; p < n_paragraphs; ++p) {
    SyntheticParagraph para;
    para.id = "syn" + std::to_string(p);
    Chunks chunks;
    for (auto& w : background(rng, 12 + draw(rng, 19))) chunks.push_back({std::move(w)});
    if (chance(rng, positive_percent)) {
      const std::size_t plants = chance(rng, double_percent) ? 2 : 1;
      for (std::size_t k = 0; k < plants; ++k) {
        const std::size_t pair = draw(rng, pairs.size());
        insert_chunk(chunks, rng, split_words(pairs[pair].first));
        para.planted.push_back(pair);
      }
    }
    if (chance(rng, expected_percent)) {
      const std::size_t pair = draw(rng, pairs.size());
      insert_chunk(chunks, rng, split_words(pairs[pair].second));
    }
    for (const auto& chunk : chunks) para.words.insert(para.words.end(), chunk.begin(), chunk.end());
    para.text = render(para.words, rng);
    corpus.paragraphs.push_back(std::move(para));
  }
  return corpus;
}

}  // namespace

std::size_t SyntheticCorpus::planted_paragraphs() const {
  std::size_t n = 0;
  for (const auto& p : paragraphs) n += p.planted.empty() ? 0 : 1;
  return n;
}

SyntheticCorpus separable_corpus(std::size_t n_paragraphs, std::uint64_t seed) {
  return generate(kTorturedPairs, n_paragraphs, seed, 40, 30, 20);
}

SyntheticCorpus distinctive_corpus(std::size_t n_paragraphs, std::uint64_t seed) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < kDistinctive.size(); ++i) {
    const std::string& partner = kDistinctivePartners[i % kDistinctivePartners.size()];
    pairs.push_back({kDistinctive[i] + " " + partner, "expected" + std::to_string(i) + " " + partner});
  }
  return generate(pairs, n_paragraphs, seed, 50, 0, 0);
}

SyntheticCorpus compositional_corpus(std::size_t n_paragraphs, std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> combos;
  for (std::size_t m = 0; m < kModifiers.size(); ++m) {
    for (std::size_t h = 0; h < kHeads.size(); ++h) combos.push_back({m, h});
  }
  Engine rng(seed ^ 0x5eedULL);
  for (std::size_t i = combos.size(); i > 1; --i) std::swap(combos[i - 1], combos[draw(rng, i)]);
  combos.resize(40);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [m, h] : combos) {
    pairs.push_back({kModifiers[m] + " " + kHeads[h],
                     "expected" + std::to_string(m) + " " + "term" + std::to_string(h)});
  }
  return generate(pairs, n_paragraphs, seed, 40, 0, 20);
}

std::string clean_text(std::size_t n_words, std::uint64_t seed) {
  Engine rng(seed);
  return render(background(rng, n_words), rng);
}

tortured::Lexicon lexicon_of(const SyntheticCorpus& corpus) {
  std::vector<tortured::PhrasePair> pairs;
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    pairs.push_back({split_words(corpus.pairs[i].first), split_words(corpus.pairs[i].second),
                     "fixture:" + std::to_string(i)});
  }
  return tortured::Lexicon::from_pairs(std::move(pairs));
}

std::vector<tortured::Paragraph> paragraphs_of(const SyntheticCorpus& corpus,
                                               const tortured::Lexicon& lexicon) {
  std::vector<tortured::Paragraph> out;
  for (const auto& p : corpus.paragraphs) {
    out.push_back(tortured::make_paragraph(p.id, p.text, "synthetic", lexicon));
  }
  return out;
}

void write_lexicon_csv(const SyntheticCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "tortured,expected\n";
  for (const auto& [t, e] : corpus.pairs) out << t << ',' << e << '\n';
}

void write_paragraphs_jsonl(const SyntheticCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& p : corpus.paragraphs) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["text"] = p.text;
    j["source"] = "synthetic";
    out << j.dump() << '\n';
  }
}

std::filesystem::path data_dir() { return TORTURED_TEST_DATA; }

TempDir::TempDir() {
  static std::random_device rd;
  for (;;) {
    path_ = std::filesystem::temp_directory_path() /
            ("tortured-test-" + std::to_string(rd()) + std::to_string(rd()));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace fixtures
