#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "tortured/tfidf.hpp"

namespace tortured {

// Flat tree node; children are indices into the owning tree's node array.
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // go left iff x[feature] <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::uint32_t, 2> class_counts{};  // weighted training counts

  bool is_leaf() const { return feature < 0; }
  // Majority class; ties go to class 0.
  int majority() const { return class_counts[1] > class_counts[0] ? 1 : 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int predict(const SparseVector& x) const;
  std::size_t depth() const;
};

struct ForestOptions {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;     // unlimited when empty
  std::optional<std::size_t> max_features;  // ceil(sqrt(dimension)) when empty
  bool bootstrap = true;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::size_t dimension = 0;
  std::size_t max_features = 0;
  std::optional<std::size_t> max_depth;
  std::uint64_t seed = 0;

  // Fraction of trees voting for class 1.
  double vote_fraction(const SparseVector& x) const;
  // Majority vote; an exact tie is class 0.
  int predict(const SparseVector& x) const;

  nlohmann::ordered_json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);
};

/// Random forest of Gini trees. Tree i draws its bootstrap sample and its
/// per-node feature subsets from an independent stream seeded by
/// seed ^ i, so the result does not depend on thread scheduling.
///
/// At each node, ceil(sqrt(dimension)) candidate features are sampled
/// among those that are not constant on the node. A node becomes a leaf
/// when it is pure, holds fewer than 2 (weighted) samples, reaches
/// max_depth, or no candidate split lowers its impurity.
ForestModel train_forest(std::span<const SparseVector> samples,
                         std::span<const int> labels, std::size_t dimension,
                         const ForestOptions& options = {});

// A sample reaching a node, with its bootstrap multiplicity.
struct WeightedSample {
  std::uint32_t index = 0;
  std::uint32_t weight = 1;
};

struct SplitChoice {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted Gini of the two children
};

/// Best Gini split of `node` restricted to `features`, scanning features in
/// increasing index order and thresholds in increasing order; a later
/// candidate must beat the incumbent by more than 1e-12 to replace it.
/// Thresholds are midpoints between consecutive distinct values.
/// Returns nullopt if every feature is constant on the node.
std::optional<SplitChoice> best_split(std::span<const SparseVector> samples,
                                      std::span<const int> labels,
                                      std::span<const WeightedSample> node,
                                      std::span<const std::uint32_t> features);

double gini(double count0, double count1);

}  // namespace tortured
