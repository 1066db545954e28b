#include "tortured/metrics.hpp"

#include <fmt/format.h>

#include "tortured/error.hpp"

namespace tortured {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

Metrics metrics_from_confusion(const Confusion& c) {
  Metrics m;
  m.confusion = c;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  // Class 0 mirrors class 1 with the roles of the cells swapped.
  m.precision = {ratio(c.tn, c.tn + c.fn), ratio(c.tp, c.tp + c.fp)};
  m.recall = {ratio(c.tn, c.tn + c.fp), ratio(c.tp, c.tp + c.fn)};
  for (int k = 0; k < 2; ++k) m.f1[k] = harmonic(m.precision[k], m.recall[k]);
  return m;
}

Metrics compute_metrics(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) {
    throw DimensionError(
        fmt::format("{} predictions for {} gold labels", predicted.size(), gold.size()));
  }
  if (gold.empty()) throw DimensionError("no predictions to score");

  Confusion c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool g = gold[i] == 1;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return metrics_from_confusion(c);
}

nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["accuracy"] = m.accuracy;
  j["precision_0"] = m.precision[0];
  j["precision_1"] = m.precision[1];
  j["recall_0"] = m.recall[0];
  j["recall_1"] = m.recall[1];
  j["f1_0"] = m.f1[0];
  j["f1_1"] = m.f1[1];
  return j;
}

}  // namespace tortured
