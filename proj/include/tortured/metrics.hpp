#pragma once

#include <array>
#include <cstddef>
#include <span>

#include <json.hpp>

namespace tortured {

// Counts with class 1 as the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

// Per-class arrays are indexed by class (0, 1). Undefined ratios are 0.
struct Metrics {
  double accuracy = 0.0;
  std::array<double, 2> precision{};
  std::array<double, 2> recall{};
  std::array<double, 2> f1{};
  Confusion confusion;
};

// Throws DimensionError on empty or mismatched inputs.
Metrics compute_metrics(std::span<const int> predicted, std::span<const int> gold);

Metrics metrics_from_confusion(const Confusion& c);

nlohmann::ordered_json to_json(const Metrics& m);

}  // namespace tortured
