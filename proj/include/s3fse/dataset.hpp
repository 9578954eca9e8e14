#ifndef S3FSE_DATASET_HPP
#define S3FSE_DATASET_HPP

#include <utility>
#include <vector>

#include "s3fse/types.hpp"

namespace s3fse {

// Z-scores every feature column over the full sample set (population std).
// Columns whose std is numerically zero map to all-zero columns.
MultiViewDataset normalize_views(const MultiViewDataset& ds);

// Horizontal concatenation of the views, in stored order. Column block v
// occupies offsets [sum_{u<v} d_u, sum_{u<=v} d_u).
ViewMatrix stack_views(const MultiViewDataset& ds);

// Per-class sampling without replacement, deterministic for a fixed seed.
// Returned index lists are ascending and partition [0, n) exactly.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>
stratified_split_indices(const LabelVector& labels, const SplitSpec& spec);

std::pair<MultiViewDataset, MultiViewDataset> stratified_split(
    const MultiViewDataset& ds, const SplitSpec& spec);

// Row subset of every view plus labels, in the order given by rows.
MultiViewDataset take_rows(const MultiViewDataset& ds,
                           const std::vector<Eigen::Index>& rows);

// Remaps arbitrary nonzero label codes to contiguous ids 1..C.
// original_ids[c-1] is the input code mapped to class c.
struct LabelRemap {
  LabelVector labels;
  std::vector<int> original_ids;
};

LabelRemap remap_labels(const std::vector<int>& codes);

}  // namespace s3fse

#endif
