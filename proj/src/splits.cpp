#include "mlsg/splits.hpp"

#include <algorithm>

#include "mlsg/rng.hpp"

namespace mlsg {

namespace {

void shuffle_ids(std::vector<int>& ids, SplitMix64& rng) {
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(ids[i - 1], ids[j]);
  }
}

}  // namespace

Splits make_splits(const LabeledDataset& dataset, int labels_per_class, int val_size,
                   int test_size, std::uint64_t seed) {
  if (labels_per_class < 1) throw DataError("make_splits: labels_per_class must be >= 1");
  if (val_size < 0 || test_size < 0) throw DataError("make_splits: negative split size");

  std::vector<std::vector<int>> by_class(dataset.num_classes);
  for (int i = 0; i < dataset.labels.size(); ++i)
    if (dataset.labels[i] != kUnlabeled) by_class[dataset.labels[i]].push_back(i);

  SplitMix64 rng = SplitMix64::stream(seed, 0x73706c69, dataset.num_classes);
  Splits out;
  std::vector<char> taken(dataset.n(), 0);
  for (int c = 0; c < dataset.num_classes; ++c) {
    auto& pool = by_class[c];  // already sorted by node id
    if (static_cast<int>(pool.size()) < labels_per_class)
      throw DataError("make_splits: class " + std::to_string(c) + " has only " +
                      std::to_string(pool.size()) + " labeled nodes, need " +
                      std::to_string(labels_per_class));
    shuffle_ids(pool, rng);
    for (int k = 0; k < labels_per_class; ++k) {
      out.train.push_back(pool[k]);
      taken[pool[k]] = 1;
    }
  }
  std::sort(out.train.begin(), out.train.end());

  std::vector<int> rest;
  for (int i = 0; i < dataset.labels.size(); ++i)
    if (dataset.labels[i] != kUnlabeled && !taken[i]) rest.push_back(i);
  if (static_cast<int>(rest.size()) < val_size + test_size)
    throw DataError("make_splits: only " + std::to_string(rest.size()) +
                    " labeled nodes left for val+test=" + std::to_string(val_size + test_size));
  shuffle_ids(rest, rng);
  out.val.assign(rest.begin(), rest.begin() + val_size);
  out.test.assign(rest.begin() + val_size, rest.begin() + val_size + test_size);
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace mlsg
