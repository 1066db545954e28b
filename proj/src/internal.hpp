#pragma once

#include <span>

#include "tortured/tfidf.hpp"

namespace tortured::internal {

// Throws DimensionError unless samples and labels pair up, labels are 0/1
// and every feature index is below `dimension`.
void check_training_shape(std::span<const SparseVector> samples,
                          std::span<const int> labels, std::size_t dimension);

}  // namespace tortured::internal
