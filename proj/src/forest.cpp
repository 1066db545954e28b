#include "tortured/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "internal.hpp"
#include "tortured/error.hpp"
#include "tortured/rng.hpp"

namespace tortured {
namespace {

constexpr double kImpurityEpsilon = 1e-12;

struct Entry {
  std::uint32_t feature;
  double value;
  std::uint32_t weight;
  int label;
};

using Counts = std::array<double, 2>;

// Nonzero feature values of the node's samples, sorted by (feature, value).
// When `features` is non-empty only those (sorted) features are kept.
std::vector<Entry> gather(std::span<const SparseVector> samples,
                          std::span<const int> labels,
                          std::span<const WeightedSample> node,
                          std::span<const std::uint32_t> features = {}) {
  std::vector<Entry> entries;
  for (const WeightedSample& s : node) {
    const SparseVector& x = samples[s.index];
    for (std::size_t k = 0; k < x.indices.size(); ++k) {
      const std::uint32_t f = x.indices[k];
      if (!features.empty() && !std::binary_search(features.begin(), features.end(), f)) {
        continue;
      }
      entries.push_back({f, x.values[k], s.weight, labels[s.index]});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.feature != b.feature ? a.feature < b.feature : a.value < b.value;
  });
  return entries;
}

struct FeatureSplit {
  double threshold;
  double impurity;
};

// Best threshold for one feature. `group` holds the node's nonzero values
// of that feature sorted by value; samples missing from it have value 0.
std::optional<FeatureSplit> split_feature(std::span<const Entry> group,
                                          const Counts& totals) {
  Counts nonzero{0.0, 0.0};
  for (const Entry& e : group) nonzero[e.label] += e.weight;
  const Counts zeros{totals[0] - nonzero[0], totals[1] - nonzero[1]};
  const bool has_zero = zeros[0] + zeros[1] > 0.0;

  // Distinct values in increasing order with their class counts.
  std::vector<std::pair<double, Counts>> levels;
  auto add = [&levels](double value, double w0, double w1) {
    if (!levels.empty() && levels.back().first == value) {
      levels.back().second[0] += w0;
      levels.back().second[1] += w1;
    } else {
      levels.push_back({value, {w0, w1}});
    }
  };
  bool zero_added = !has_zero;
  for (const Entry& e : group) {
    if (!zero_added && e.value >= 0.0) {
      add(0.0, zeros[0], zeros[1]);
      zero_added = true;
    }
    add(e.value, e.label == 0 ? e.weight : 0.0, e.label == 1 ? e.weight : 0.0);
  }
  if (!zero_added) add(0.0, zeros[0], zeros[1]);
  if (levels.size() < 2) return std::nullopt;

  const double n = totals[0] + totals[1];
  Counts left{0.0, 0.0};
  std::optional<FeatureSplit> best;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    left[0] += levels[k].second[0];
    left[1] += levels[k].second[1];
    const double nl = left[0] + left[1];
    const double nr = n - nl;
    const double impurity = (nl / n) * gini(left[0], left[1]) +
                            (nr / n) * gini(totals[0] - left[0], totals[1] - left[1]);
    double threshold = 0.5 * (levels[k].first + levels[k + 1].first);
    if (threshold >= levels[k + 1].first) threshold = levels[k].first;
    if (!best || impurity < best->impurity - kImpurityEpsilon) {
      best = FeatureSplit{threshold, impurity};
    }
  }
  return best;
}

Counts node_totals(std::span<const int> labels, std::span<const WeightedSample> node) {
  Counts c{0.0, 0.0};
  for (const WeightedSample& s : node) c[labels[s.index]] += s.weight;
  return c;
}

struct Group {
  std::uint32_t feature;
  std::size_t begin;
  std::size_t end;
};

std::vector<Group> group_by_feature(const std::vector<Entry>& entries) {
  std::vector<Group> groups;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].feature == entries[i].feature) ++j;
    groups.push_back({entries[i].feature, i, j});
    i = j;
  }
  return groups;
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const SparseVector> samples, std::span<const int> labels,
              std::size_t max_features, std::optional<std::size_t> max_depth, Rng rng)
      : samples_(samples),
        labels_(labels),
        max_features_(max_features),
        max_depth_(max_depth),
        rng_(rng) {}

  DecisionTree build(std::vector<WeightedSample> root) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    struct Pending {
      std::size_t node;
      std::vector<WeightedSample> members;
      std::size_t depth;
    };
    std::vector<Pending> stack;
    stack.push_back({0, std::move(root), 0});

    while (!stack.empty()) {
      Pending item = std::move(stack.back());
      stack.pop_back();

      const Counts totals = node_totals(labels_, item.members);
      TreeNode& node = tree.nodes[item.node];
      node.class_counts = {static_cast<std::uint32_t>(totals[0]),
                           static_cast<std::uint32_t>(totals[1])};

      const auto split = choose_split(item.members, totals, item.depth);
      if (!split) continue;

      std::vector<WeightedSample> left, right;
      for (const WeightedSample& s : item.members) {
        (samples_[s.index].at(split->feature) <= split->threshold ? left : right).push_back(s);
      }

      const auto left_index = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& parent = tree.nodes[item.node];
      parent.feature = static_cast<std::int32_t>(split->feature);
      parent.threshold = split->threshold;
      parent.left = left_index;
      parent.right = left_index + 1;

      stack.push_back({static_cast<std::size_t>(left_index + 1), std::move(right),
                       item.depth + 1});
      stack.push_back({static_cast<std::size_t>(left_index), std::move(left),
                       item.depth + 1});
    }
    return tree;
  }

 private:
  std::optional<SplitChoice> choose_split(std::span<const WeightedSample> members,
                                          const Counts& totals, std::size_t depth) {
    if (totals[0] == 0.0 || totals[1] == 0.0) return std::nullopt;
    if (totals[0] + totals[1] < 2.0) return std::nullopt;
    if (max_depth_ && depth >= *max_depth_) return std::nullopt;

    const std::vector<Entry> entries = gather(samples_, labels_, members);
    std::vector<Group> candidates;
    for (const Group& g : group_by_feature(entries)) {
      double lo = entries[g.begin].value;
      double hi = entries[g.end - 1].value;
      if (g.end - g.begin < members.size()) {
        lo = std::min(lo, 0.0);
        hi = std::max(hi, 0.0);
      }
      if (lo < hi) candidates.push_back(g);
    }
    if (candidates.empty()) return std::nullopt;

    if (candidates.size() > max_features_) {
      // Partial Fisher-Yates: uniform subset of size max_features_.
      for (std::size_t i = 0; i < max_features_; ++i) {
        const auto j = i + static_cast<std::size_t>(rng_.below(candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
      }
      candidates.resize(max_features_);
      std::sort(candidates.begin(), candidates.end(),
                [](const Group& a, const Group& b) { return a.feature < b.feature; });
    }

    std::optional<SplitChoice> best;
    for (const Group& g : candidates) {
      const auto s = split_feature(
          std::span<const Entry>(entries.data() + g.begin, g.end - g.begin), totals);
      if (s && (!best || s->impurity < best->impurity - kImpurityEpsilon)) {
        best = SplitChoice{g.feature, s->threshold, s->impurity};
      }
    }
    if (!best || best->impurity >= gini(totals[0], totals[1]) - kImpurityEpsilon) {
      return std::nullopt;
    }
    return best;
  }

  std::span<const SparseVector> samples_;
  std::span<const int> labels_;
  std::size_t max_features_;
  std::optional<std::size_t> max_depth_;
  Rng rng_;
};

nlohmann::ordered_json tree_to_json(const DecisionTree& tree) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const TreeNode& n : tree.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"counts", n.class_counts}});
  }
  return nodes;
}

DecisionTree tree_from_json(const nlohmann::json& j, std::size_t dimension) {
  DecisionTree tree;
  for (const auto& n : j) {
    TreeNode node;
    node.feature = n.at("feature").get<std::int32_t>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<std::int32_t>();
    node.right = n.at("right").get<std::int32_t>();
    node.class_counts = n.at("counts").get<std::array<std::uint32_t, 2>>();
    tree.nodes.push_back(node);
  }
  const auto size = static_cast<std::int32_t>(tree.nodes.size());
  if (size == 0) throw InputError("tree without nodes");
  for (std::int32_t i = 0; i < size; ++i) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(i)];
    if (n.is_leaf()) continue;
    // Children always follow their parent, which also rules out cycles.
    if (static_cast<std::size_t>(n.feature) >= dimension || !std::isfinite(n.threshold) ||
        n.left <= i || n.right <= i || n.left >= size || n.right >= size) {
      throw InputError(fmt::format("invalid split node {}", i));
    }
  }
  return tree;
}

}  // namespace

double gini(double count0, double count1) {
  const double n = count0 + count1;
  if (n <= 0.0) return 0.0;
  const double p0 = count0 / n;
  const double p1 = count1 / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

std::optional<SplitChoice> best_split(std::span<const SparseVector> samples,
                                      std::span<const int> labels,
                                      std::span<const WeightedSample> node,
                                      std::span<const std::uint32_t> features) {
  std::vector<std::uint32_t> sorted(features.begin(), features.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty() || node.empty()) return std::nullopt;

  const std::vector<Entry> entries = gather(samples, labels, node, sorted);
  const Counts totals = node_totals(labels, node);

  std::optional<SplitChoice> best;
  std::size_t pos = 0;
  for (std::uint32_t f : sorted) {
    const std::size_t begin = pos;
    while (pos < entries.size() && entries[pos].feature == f) ++pos;
    const auto s = split_feature(std::span<const Entry>(entries.data() + begin, pos - begin),
                                 totals);
    if (s && (!best || s->impurity < best->impurity - kImpurityEpsilon)) {
      best = SplitChoice{f, s->threshold, s->impurity};
    }
  }
  return best;
}

int DecisionTree::predict(const SparseVector& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x.at(static_cast<std::uint32_t>(n.feature)) <= n.threshold
                                     ? n.left
                                     : n.right);
  }
  return nodes[i].majority();
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

double ForestModel::vote_fraction(const SparseVector& x) const {
  if (trees.empty()) return 0.0;
  std::size_t votes = 0;
  for (const DecisionTree& t : trees) votes += static_cast<std::size_t>(t.predict(x));
  return static_cast<double>(votes) / static_cast<double>(trees.size());
}

int ForestModel::predict(const SparseVector& x) const {
  std::size_t votes = 0;
  for (const DecisionTree& t : trees) votes += static_cast<std::size_t>(t.predict(x));
  return 2 * votes > trees.size() ? 1 : 0;
}

ForestModel train_forest(std::span<const SparseVector> samples,
                         std::span<const int> labels, std::size_t dimension,
                         const ForestOptions& options) {
  internal::check_training_shape(samples, labels, dimension);
  if (options.n_trees == 0) throw ConfigError("a forest needs at least one tree");
  if (samples.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DimensionError("too many training samples");
  }

  ForestModel model;
  model.dimension = dimension;
  model.max_depth = options.max_depth;
  model.seed = options.seed;
  model.max_features = options.max_features.value_or(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dimension)))));
  model.max_features = std::max<std::size_t>(model.max_features, 1);
  model.trees.resize(options.n_trees);

  auto grow = [&](std::size_t t) {
    Rng rng = Rng::stream(options.seed, t);
    const std::size_t n = samples.size();
    std::vector<std::uint32_t> multiplicity(n, options.bootstrap ? 0 : 1);
    if (options.bootstrap) {
      for (std::size_t draw = 0; draw < n; ++draw) ++multiplicity[rng.below(n)];
    }
    std::vector<WeightedSample> root;
    for (std::size_t i = 0; i < n; ++i) {
      if (multiplicity[i] > 0) root.push_back({static_cast<std::uint32_t>(i), multiplicity[i]});
    }
    TreeBuilder builder(samples, labels, model.max_features, options.max_depth, rng);
    model.trees[t] = builder.build(std::move(root));
  };

  std::size_t workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, options.n_trees);
  if (workers == 1) {
    for (std::size_t t = 0; t < options.n_trees; ++t) grow(t);
    return model;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t t; (t = next.fetch_add(1)) < options.n_trees;) grow(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return model;
}

nlohmann::ordered_json ForestModel::to_json() const {
  nlohmann::ordered_json j;
  j["dimension"] = dimension;
  j["max_features"] = max_features;
  j["max_depth"] = max_depth ? nlohmann::ordered_json(*max_depth) : nlohmann::ordered_json();
  j["seed"] = seed;
  j["n_trees"] = trees.size();
  nlohmann::ordered_json forest = nlohmann::ordered_json::array();
  for (const DecisionTree& t : trees) forest.push_back(tree_to_json(t));
  j["trees"] = std::move(forest);
  return j;
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  ForestModel m;
  m.dimension = j.at("dimension").get<std::size_t>();
  m.max_features = j.at("max_features").get<std::size_t>();
  if (!j.at("max_depth").is_null()) m.max_depth = j.at("max_depth").get<std::size_t>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, m.dimension));
  if (m.trees.empty() || m.trees.size() != j.at("n_trees").get<std::size_t>()) {
    throw InputError("forest tree count is inconsistent");
  }
  return m;
}

}  // namespace tortured
