#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "tortured/tfidf.hpp"

namespace tortured {

struct PerceptronOptions {
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
};

// Rosenblatt perceptron, learning rate 1, labels mapped to {-1, +1}.
struct PerceptronModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t epochs_run = 0;
  std::size_t updates = 0;  // total mistakes corrected during training
  bool converged = false;   // an epoch finished without updates
  std::uint64_t seed = 0;

  std::size_t dimension() const { return weights.size(); }
  double decision(const SparseVector& x) const;
  // 1 iff decision(x) > 0; a zero activation is class 0.
  int predict(const SparseVector& x) const { return decision(x) > 0.0 ? 1 : 0; }

  nlohmann::ordered_json to_json() const;
  static PerceptronModel from_json(const nlohmann::json& j);
};

/// Trains on `samples` with 0/1 `labels` over `dimension` features.
/// Samples are visited in a freshly shuffled order every epoch; training
/// stops at the first epoch without a mistake.
///
/// Throws DimensionError when sizes disagree or an index is >= dimension.
PerceptronModel train_perceptron(std::span<const SparseVector> samples,
                                 std::span<const int> labels,
                                 std::size_t dimension,
                                 const PerceptronOptions& options = {});

}  // namespace tortured
