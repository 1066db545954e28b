#include "tortured/perceptron.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "internal.hpp"
#include "tortured/error.hpp"
#include "tortured/rng.hpp"

namespace tortured {

void internal::check_training_shape(std::span<const SparseVector> samples,
                                    std::span<const int> labels,
                                    std::size_t dimension) {
  if (samples.empty()) throw DimensionError("no training samples");
  if (samples.size() != labels.size()) {
    throw DimensionError(fmt::format("{} samples but {} labels", samples.size(),
                                     labels.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& x = samples[i];
    if (x.indices.size() != x.values.size()) {
      throw DimensionError(fmt::format("sample {} has mismatched sparse arrays", i));
    }
    if (!x.indices.empty() && x.indices.back() >= dimension) {
      throw DimensionError(fmt::format("sample {} has feature {} but dimension is {}", i,
                                       x.indices.back(), dimension));
    }
    if (labels[i] != 0 && labels[i] != 1) {
      throw DimensionError(fmt::format("label {} of sample {} is not 0/1", labels[i], i));
    }
  }
}

double PerceptronModel::decision(const SparseVector& x) const {
  double sum = bias;
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    const auto index = x.indices[k];
    if (index < weights.size()) sum += weights[index] * x.values[k];
  }
  return sum;
}

PerceptronModel train_perceptron(std::span<const SparseVector> samples,
                                 std::span<const int> labels,
                                 std::size_t dimension,
                                 const PerceptronOptions& options) {
  internal::check_training_shape(samples, labels, dimension);

  PerceptronModel model;
  model.weights.assign(dimension, 0.0);
  model.seed = options.seed;

  Rng rng(options.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    std::size_t mistakes = 0;
    for (std::size_t i : order) {
      const double target = labels[i] == 1 ? 1.0 : -1.0;
      if (target * model.decision(samples[i]) > 0.0) continue;
      const SparseVector& x = samples[i];
      for (std::size_t k = 0; k < x.indices.size(); ++k) {
        model.weights[x.indices[k]] += target * x.values[k];
      }
      model.bias += target;
      ++mistakes;
    }
    model.updates += mistakes;
    model.epochs_run = epoch + 1;
    if (mistakes == 0) {
      model.converged = true;
      break;
    }
  }
  return model;
}

nlohmann::ordered_json PerceptronModel::to_json() const {
  nlohmann::ordered_json j;
  j["weights"] = weights;
  j["bias"] = bias;
  j["epochs_run"] = epochs_run;
  j["updates"] = updates;
  j["converged"] = converged;
  j["seed"] = seed;
  return j;
}

PerceptronModel PerceptronModel::from_json(const nlohmann::json& j) {
  PerceptronModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.epochs_run = j.at("epochs_run").get<std::size_t>();
  m.updates = j.value("updates", std::size_t{0});
  m.converged = j.value("converged", false);
  m.seed = j.at("seed").get<std::uint64_t>();
  for (double w : m.weights) {
    if (!std::isfinite(w)) throw InputError("perceptron weight is not finite");
  }
  if (!std::isfinite(m.bias)) throw InputError("perceptron bias is not finite");
  return m;
}

}  // namespace tortured
