// tortured: build five-gram datasets, train and evaluate window
// classifiers, compare phrase cosine scores and scan documents.
//
// Exit codes: 0 success (possibly with warnings), 1 input error,
// 2 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tortured/classifier.hpp"
#include "tortured/corpus.hpp"
#include "tortured/embed.hpp"
#include "tortured/error.hpp"
#include "tortured/experiment.hpp"
#include "tortured/ngram.hpp"
#include "tortured/scan.hpp"

namespace fs = std::filesystem;
using namespace tortured;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& common, bool output_required) {
  cmd->add_option("--seed", common.seed, "Random seed (overrides the config)");
  auto* out = cmd->add_option("--output", common.output, "Output path or prefix");
  if (output_required) out->required();
  cmd->add_option("--format", common.format, "Summary format on stdout")
      ->check(CLI::IsMember({"json", "text"}));
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

void print_diagnostics(const std::vector<std::string>& diagnostics) {
  for (const auto& d : diagnostics) warn(d);
}

// Writes through a temporary file so a failure leaves no partial output.
template <typename Writer>
void write_atomically(const fs::path& path, Writer&& write) {
  if (path.has_parent_path() && !fs::exists(path.parent_path())) {
    throw InputError(fmt::format("output directory '{}' does not exist",
                                 path.parent_path().string()));
  }
  const fs::path tmp = fs::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
    write(out);
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw InputError(fmt::format("error writing '{}'", path.string()));
    }
  }
  fs::rename(tmp, path);
}

fs::path with_suffix(const std::string& prefix, const char* suffix) {
  return fs::path(prefix + suffix);
}

int build_dataset_cmd(const std::string& lexicon_path, const std::string& paragraphs_path,
                      std::size_t window, const Common& common) {
  LexiconReport lexicon_report;
  const Lexicon lexicon = load_lexicon(lexicon_path, &lexicon_report);
  print_diagnostics(lexicon_report.diagnostics);

  ParagraphReport paragraph_report;
  const auto paragraphs = load_paragraphs(paragraphs_path, lexicon, &paragraph_report);
  print_diagnostics(paragraph_report.diagnostics);

  const Dataset dataset = build_dataset(paragraphs, lexicon, window);
  write_atomically(common.output, [&](std::ostream& out) { write_dataset(dataset.windows, out); });

  const DatasetSummary& s = dataset.summary;
  if (common.format == "json") {
    nlohmann::ordered_json j;
    j["lexicon_pairs"] = lexicon.size();
    j["paragraphs"] = s.paragraphs;
    j["short_paragraphs"] = s.short_paragraphs;
    j["total"] = s.total;
    j["positive"] = s.positive;
    j["negative"] = s.negative;
    j["negative_in_positive_paragraphs"] = s.negative_in_positive_paragraphs;
    j["negative_in_negative_paragraphs"] = s.negative_in_negative_paragraphs;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << fmt::format("{} phrase pairs, {} paragraphs ({} shorter than {} tokens)\n",
                             lexicon.size(), s.paragraphs, s.short_paragraphs, window)
              << fmt::format("total {}  positive {}  negative {}\n", s.total, s.positive,
                             s.negative)
              << fmt::format("negatives from positive paragraphs {}, from negative paragraphs {}\n",
                             s.negative_in_positive_paragraphs, s.negative_in_negative_paragraphs);
  }
  return 0;
}

ExperimentConfig config_with_overrides(const std::string& config_path, const Common& common) {
  ExperimentConfig config = load_config(config_path);
  if (common.seed) {
    config.seed = config.split.seed = config.forest.seed = config.perceptron.seed = *common.seed;
  }
  if (!common.output.empty()) config.output = common.output;
  return config;
}

void print_report(const ExperimentReport& report, const Common& common) {
  if (common.format == "json") {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    std::cout << report.to_text();
  }
}

int train_cmd(const std::string& config_path, const Common& common) {
  const ExperimentConfig config = config_with_overrides(config_path, common);
  const ExperimentResult result = run_experiment(config);
  const std::string prefix = config.output.string();

  write_atomically(with_suffix(prefix, ".model.json"),
                   [&](std::ostream& out) { out << result.model.to_json().dump() << '\n'; });
  write_atomically(with_suffix(prefix, ".vectorizer.json"),
                   [&](std::ostream& out) { out << result.vectorizer.to_json().dump(1) << '\n'; });
  write_atomically(with_suffix(prefix, ".report.json"),
                   [&](std::ostream& out) { out << result.report.to_json().dump(2) << '\n'; });
  print_report(result.report, common);
  return 0;
}

int evaluate_cmd(const std::string& config_path, const std::string& model_path,
                 const std::string& vectorizer_path, const Common& common) {
  const ExperimentConfig config = config_with_overrides(config_path, common);
  const Classifier model = Classifier::load(model_path);
  const TfIdfModel vectorizer = TfIdfModel::load(vectorizer_path);
  const ExperimentReport report = evaluate_model(config, model, vectorizer);

  const fs::path out = common.output.empty() ? with_suffix(config.output.string(), ".eval.json")
                                             : fs::path(common.output);
  write_atomically(out, [&](std::ostream& o) { o << report.to_json().dump(2) << '\n'; });
  print_report(report, common);
  return 0;
}

int cosine_compare_cmd(const std::string& lexicon_path, const std::string& embeddings_path,
                       std::optional<std::size_t> dim, bool contextual, const Common& common) {
  LexiconReport lexicon_report;
  const Lexicon lexicon = load_lexicon(lexicon_path, &lexicon_report);
  print_diagnostics(lexicon_report.diagnostics);

  EmbeddingLoadReport load_report;
  const EmbeddingTable table =
      load_embeddings(embeddings_path, dim,
                      contextual ? EmbeddingKind::ContextualExport : EmbeddingKind::Static,
                      &load_report);
  if (load_report.skipped() > 0) {
    warn(fmt::format("{} embedding lines skipped", load_report.skipped()));
  }

  const ComparisonReport report = compare_lexicon(lexicon, table);
  nlohmann::ordered_json summary = comparison_summary(report);
  summary["embedding_dim"] = table.dim();
  summary["embedding_tokens"] = table.size();
  summary["embedding_lines_skipped"] = load_report.skipped();

  write_atomically(with_suffix(common.output, ".csv"),
                   [&](std::ostream& out) { write_comparison_csv(report, out); });
  write_atomically(with_suffix(common.output, ".summary.json"),
                   [&](std::ostream& out) { out << summary.dump(2) << '\n'; });

  if (report.degenerate) {
    warn("fewer than 2 positive scores on one side; medians are not meaningful");
  }
  if (common.format == "json") {
    std::cout << summary.dump(2) << '\n';
  } else {
    auto show = [](const std::optional<double>& v) {
      return v ? fmt::format("{:.4f}", *v) : std::string("n/a");
    };
    std::cout << fmt::format("median expected {}  median tortured {}\n",
                             show(report.median_expected), show(report.median_tortured))
              << fmt::format("retained {} tortured / {} expected, discarded {} / {}\n",
                             report.tortured_scores.size(), report.expected_scores.size(),
                             report.discarded_tortured, report.discarded_expected);
  }
  return 0;
}

struct ScanArgs {
  std::string document;
  std::string model;
  std::string vectorizer;
  std::string embeddings;
  double low = kDefaultThresholdLow;
  double high = kDefaultThresholdHigh;
};

int scan_cmd(const ScanArgs& args, const Common& common) {
  if (args.low > args.high) {
    throw ConfigError(fmt::format("--threshold-low {} exceeds --threshold-high {}", args.low,
                                  args.high));
  }
  std::ifstream in(args.document, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open document '{}'", args.document));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const Classifier model = Classifier::load(args.model);
  const TfIdfModel vectorizer = TfIdfModel::load(args.vectorizer);
  std::optional<EmbeddingTable> embeddings;
  if (!args.embeddings.empty()) embeddings = load_embeddings(args.embeddings);

  ScanOptions options;
  options.threshold_low = args.low;
  options.threshold_high = args.high;
  const ScanResult result =
      scan_document(text, vectorizer, model, embeddings ? &*embeddings : nullptr, options);
  if (result.too_short) {
    warn(fmt::format("document has {} tokens, fewer than one window; no findings",
                     result.tokens));
  }

  if (common.output.empty() || common.output == "-") {
    write_findings(result.findings, std::cout);
    return 0;
  }
  write_atomically(common.output,
                   [&](std::ostream& out) { write_findings(result.findings, out); });
  if (common.format == "json") {
    nlohmann::ordered_json j;
    j["tokens"] = result.tokens;
    j["windows"] = result.windows;
    j["positive_windows"] = result.positive_windows;
    j["findings"] = result.findings.size();
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << fmt::format("{} tokens, {} windows, {} positive, {} findings\n", result.tokens,
                             result.windows, result.positive_windows, result.findings.size());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tortured-phrase detection toolkit"};
  app.require_subcommand(1);

  Common common;

  std::string lexicon, paragraphs, config, model, vectorizer, embeddings;
  std::size_t window = kWindowSize;
  auto* build = app.add_subcommand("build-dataset", "Extract labeled five-gram windows");
  build->add_option("--lexicon", lexicon, "Phrase lexicon CSV")->required();
  build->add_option("--paragraphs", paragraphs, "Paragraph JSONL")->required();
  build->add_option("--window", window, "Window size")->check(CLI::PositiveNumber);
  add_common(build, common, true);

  auto* train = app.add_subcommand("train", "Train and evaluate a classifier from a config");
  train->add_option("--config", config, "Experiment config JSON")->required();
  add_common(train, common, false);

  auto* evaluate = app.add_subcommand("evaluate", "Score a trained model on the config's test split");
  evaluate->add_option("--config", config, "Experiment config JSON")->required();
  evaluate->add_option("--model", model, "Model JSON")->required();
  evaluate->add_option("--vectorizer", vectorizer, "Vectorizer JSON")->required();
  add_common(evaluate, common, false);

  std::optional<std::size_t> dim;
  bool contextual = false;
  auto* cosine_cmd = app.add_subcommand("cosine-compare", "Compare phrase-token cosine scores");
  cosine_cmd->add_option("--lexicon", lexicon, "Phrase lexicon CSV")->required();
  cosine_cmd->add_option("--embeddings", embeddings, "Embedding text file")->required();
  cosine_cmd->add_option("--dim", dim, "Expected embedding dimension");
  cosine_cmd->add_flag("--contextual", contextual, "Vectors come from a contextual export");
  add_common(cosine_cmd, common, true);

  ScanArgs scan;
  auto* scan_app = app.add_subcommand("scan", "Flag candidate tortured-phrase spans in a document");
  scan_app->add_option("--document", scan.document, "Plain-text document")->required();
  scan_app->add_option("--model", scan.model, "Model JSON")->required();
  scan_app->add_option("--vectorizer", scan.vectorizer, "Vectorizer JSON")->required();
  scan_app->add_option("--embeddings", scan.embeddings, "Embedding text file for bigram verdicts");
  scan_app->add_option("--threshold-low", scan.low, "Scores below are tortured");
  scan_app->add_option("--threshold-high", scan.high, "Scores above are legitimate");
  add_common(scan_app, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*build) return build_dataset_cmd(lexicon, paragraphs, window, common);
    if (*train) return train_cmd(config, common);
    if (*evaluate) return evaluate_cmd(config, model, vectorizer, common);
    if (*cosine_cmd) return cosine_compare_cmd(lexicon, embeddings, dim, contextual, common);
    if (*scan_app) return scan_cmd(scan, common);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
