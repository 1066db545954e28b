#include "tortured/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "tortured/error.hpp"
#include "tortured/rng.hpp"

namespace tortured {
namespace {

void check_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError(fmt::format("train_fraction {} must lie strictly between 0 and 1", fraction));
  }
}

// Minimal union-find over lexicon pair indices.
class PhraseGroups {
 public:
  std::size_t find(std::size_t x) {
    auto [it, inserted] = parent_.try_emplace(x, x);
    if (it->second == x) return x;
    const std::size_t root = find(it->second);
    parent_[x] = root;
    return root;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (const auto& [k, v] : parent_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::size_t, std::size_t> parent_;
};

struct Unit {
  std::vector<std::size_t> phrases;
  std::vector<std::size_t> windows;
};

}  // namespace

std::string_view to_string(SplitMode mode) {
  switch (mode) {
    case SplitMode::PhraseDisjoint: return "phrase-disjoint";
    case SplitMode::BalancedPhraseDisjoint: return "balanced-phrase-disjoint";
    case SplitMode::Random: break;
  }
  return "random";
}

SplitMode parse_split_mode(std::string_view name) {
  if (name == "random") return SplitMode::Random;
  if (name == "phrase-disjoint") return SplitMode::PhraseDisjoint;
  if (name == "balanced-phrase-disjoint") return SplitMode::BalancedPhraseDisjoint;
  throw ConfigError(fmt::format(
      "unknown split mode '{}' (expected random|phrase-disjoint|balanced-phrase-disjoint)", name));
}

std::size_t train_size(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
}

Split split_random(std::size_t n, double train_fraction, std::uint64_t seed) {
  check_fraction(train_fraction);
  const std::size_t cut = train_size(n, train_fraction);
  if (cut == 0 || cut >= n) {
    throw InputError(fmt::format("a {} split of {} items leaves one side empty", train_fraction, n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  return s;
}

PhraseDisjointSplit split_phrase_disjoint(std::span<const LabeledWindow> windows,
                                          const Lexicon& lexicon, double train_fraction,
                                          std::uint64_t seed) {
  check_fraction(train_fraction);

  // Every phrase contained in each positive window; co-occurring phrases
  // must land on the same side.
  PhraseGroups groups;
  std::vector<std::vector<std::size_t>> contained(windows.size());
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].label != 1) {
      negatives.push_back(i);
      continue;
    }
    for (const Occurrence& o : match_phrases(windows[i].tokens, lexicon)) {
      contained[i].push_back(o.pair);
    }
    if (contained[i].empty()) {
      throw InputError(fmt::format(
          "positive window {} of paragraph '{}' contains no lexicon phrase", windows[i].offset,
          windows[i].paragraph_id));
    }
    for (std::size_t p : contained[i]) groups.unite(contained[i].front(), p);
  }

  std::map<std::size_t, Unit> by_root;
  for (std::size_t p : groups.members()) by_root[groups.find(p)].phrases.push_back(p);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!contained[i].empty()) by_root[groups.find(contained[i].front())].windows.push_back(i);
  }
  std::vector<Unit> units;
  for (auto& [root, unit] : by_root) units.push_back(std::move(unit));
  if (units.size() < 2) {
    throw InputError(fmt::format(
        "phrase-disjoint split needs at least 2 independent phrase groups, found {}",
        units.size()));
  }

  Rng phrase_rng = Rng::stream(seed, 1);
  phrase_rng.shuffle(std::span<Unit>(units));
  std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
    return a.windows.size() > b.windows.size();
  });

  std::size_t positives = 0;
  for (const Unit& u : units) positives += u.windows.size();
  const double target = train_fraction * static_cast<double>(positives);

  std::vector<bool> to_train(units.size(), false);
  double in_train = 0.0;
  for (std::size_t k = 0; k < units.size(); ++k) {
    const double with = in_train + static_cast<double>(units[k].windows.size());
    if (std::abs(with - target) < std::abs(in_train - target)) {
      to_train[k] = true;
      in_train = with;
    }
  }
  // Both sides need at least one group; units are sorted largest first.
  if (std::none_of(to_train.begin(), to_train.end(), [](bool b) { return b; })) {
    to_train.front() = true;
  }
  if (std::all_of(to_train.begin(), to_train.end(), [](bool b) { return b; })) {
    to_train.back() = false;
  }

  PhraseDisjointSplit result;
  for (std::size_t k = 0; k < units.size(); ++k) {
    auto& windows_side = to_train[k] ? result.split.train : result.split.test;
    auto& phrases_side = to_train[k] ? result.train_phrases : result.test_phrases;
    windows_side.insert(windows_side.end(), units[k].windows.begin(), units[k].windows.end());
    phrases_side.insert(phrases_side.end(), units[k].phrases.begin(), units[k].phrases.end());
  }

  Rng negative_rng = Rng::stream(seed, 2);
  negative_rng.shuffle(std::span<std::size_t>(negatives));
  const std::size_t cut = train_size(negatives.size(), train_fraction);
  result.split.train.insert(result.split.train.end(), negatives.begin(),
                            negatives.begin() + static_cast<std::ptrdiff_t>(cut));
  result.split.test.insert(result.split.test.end(),
                           negatives.begin() + static_cast<std::ptrdiff_t>(cut), negatives.end());

  std::sort(result.split.train.begin(), result.split.train.end());
  std::sort(result.split.test.begin(), result.split.test.end());
  std::sort(result.train_phrases.begin(), result.train_phrases.end());
  std::sort(result.test_phrases.begin(), result.test_phrases.end());
  return result;
}

std::vector<std::size_t> balance(std::span<const std::size_t> indices,
                                 std::span<const int> labels, std::uint64_t seed) {
  std::vector<std::size_t> positive, negative;
  for (std::size_t i : indices) (labels[i] == 1 ? positive : negative).push_back(i);
  if (positive.empty() || negative.empty()) {
    throw InputError(fmt::format("cannot balance: {} positive and {} negative items",
                                 positive.size(), negative.size()));
  }
  Rng rng(seed);
  auto& majority = positive.size() > negative.size() ? positive : negative;
  const std::size_t keep = std::min(positive.size(), negative.size());
  rng.shuffle(std::span<std::size_t>(majority));
  majority.resize(keep);

  std::vector<std::size_t> out;
  out.reserve(2 * keep);
  out.insert(out.end(), negative.begin(), negative.end());
  out.insert(out.end(), positive.begin(), positive.end());
  rng.shuffle(std::span<std::size_t>(out));
  return out;
}

Split make_split(std::span<const LabeledWindow> windows, const Lexicon* lexicon,
                 const SplitSpec& spec) {
  if (spec.mode == SplitMode::Random) {
    return split_random(windows.size(), spec.train_fraction, spec.seed);
  }
  if (!lexicon) throw ConfigError("phrase-disjoint splits need a lexicon");
  Split s = split_phrase_disjoint(windows, *lexicon, spec.train_fraction, spec.seed).split;
  if (spec.mode == SplitMode::BalancedPhraseDisjoint) {
    std::vector<int> labels(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) labels[i] = windows[i].label;
    s.train = balance(s.train, labels, Rng::stream(spec.seed, 3).next());
    s.test = balance(s.test, labels, Rng::stream(spec.seed, 4).next());
  }
  return s;
}

}  // namespace tortured
