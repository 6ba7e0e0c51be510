#pragma once

#include <cstdint>

#include "mlsg/types.hpp"

namespace mlsg {

/// Samples `labels_per_class` labeled train nodes per class, then `val_size`
/// validation and `test_size` test nodes from the remaining labeled pool.
/// Pure function of its arguments: repeated calls are bit-identical.
Splits make_splits(const LabeledDataset& dataset, int labels_per_class, int val_size,
                   int test_size, std::uint64_t seed);

}  // namespace mlsg
