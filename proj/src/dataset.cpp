#include "s3fse/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "s3fse/rng.hpp"

namespace s3fse {

void HyperspectralCube::validate() const {
  if (width < 1 || height < 1 || bands < 1) {
    throw std::invalid_argument("cube: dimensions must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(width) * height * bands;
  if (data.size() != expected) {
    throw std::invalid_argument("cube: data length does not match width*height*bands");
  }
  for (float v : data) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("cube: non-finite value in raster");
    }
  }
}

void ViewMatrix::validate() const {
  if (!values.allFinite()) {
    throw std::invalid_argument("view '" + name + "': non-finite entries");
  }
}

void LabelVector::validate() const {
  if (num_classes < 1) {
    throw std::invalid_argument("labels: num_classes must be >= 1");
  }
  std::vector<bool> seen(static_cast<std::size_t>(num_classes), false);
  for (int c : classes) {
    if (c < 1 || c > num_classes) {
      throw std::invalid_argument("labels: class id out of [1, C]");
    }
    seen[static_cast<std::size_t>(c - 1)] = true;
  }
  for (int c = 0; c < num_classes; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw std::invalid_argument("labels: class " + std::to_string(c + 1) +
                                  " has no samples");
    }
  }
}

Eigen::Index MultiViewDataset::total_dim() const {
  Eigen::Index m = 0;
  for (const auto& v : views) m += v.dim();
  return m;
}

void MultiViewDataset::validate() const {
  if (views.empty()) {
    throw std::invalid_argument("dataset: at least one view required");
  }
  const Eigen::Index n0 = views.front().n();
  for (const auto& v : views) {
    v.validate();
    if (v.n() != n0) {
      throw std::invalid_argument("dataset: sample count differs across views");
    }
  }
  if (labels.n() != n0) {
    throw std::invalid_argument("dataset: label count does not match samples");
  }
  labels.validate();
}

MultiViewDataset normalize_views(const MultiViewDataset& ds) {
  if (ds.views.empty() || ds.n() == 0) {
    throw std::invalid_argument("normalize_views: empty dataset");
  }
  if (ds.n() < 2) {
    throw std::invalid_argument("normalize_views: need at least 2 samples");
  }
  MultiViewDataset out = ds;
  const double n = static_cast<double>(ds.n());
  for (auto& view : out.views) {
    Eigen::MatrixXd& X = view.values;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      auto col = X.col(j);
      const double mean = col.mean();
      const double var = (col.array() - mean).square().sum() / n;
      const double sd = std::sqrt(var);
      // Constant columns (up to fp residue proportional to their magnitude)
      // map to zeros instead of dividing by a spurious tiny std.
      const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
      if (sd <= 1e-12 * scale) {
        col.setZero();
      } else {
        col = (col.array() - mean) / sd;
      }
    }
  }
  return out;
}

ViewMatrix stack_views(const MultiViewDataset& ds) {
  if (ds.views.empty()) {
    throw std::invalid_argument("stack_views: at least one view required");
  }
  const Eigen::Index n = ds.views.front().n();
  for (const auto& v : ds.views) {
    if (v.n() != n) {
      throw std::invalid_argument("stack_views: sample count differs across views");
    }
  }
  ViewMatrix out;
  out.name = "stacked";
  out.values.resize(n, ds.total_dim());
  Eigen::Index offset = 0;
  for (const auto& v : ds.views) {
    out.values.middleCols(offset, v.dim()) = v.values;
    offset += v.dim();
  }
  return out;
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>
stratified_split_indices(const LabelVector& labels, const SplitSpec& spec) {
  labels.validate();
  if (spec.per_class_train < 1) {
    throw std::invalid_argument("split: per_class_train must be >= 1");
  }
  std::vector<std::vector<Eigen::Index>> by_class(
      static_cast<std::size_t>(labels.num_classes));
  for (Eigen::Index i = 0; i < labels.n(); ++i) {
    by_class[static_cast<std::size_t>(labels.classes[i] - 1)].push_back(i);
  }
  for (int c = 0; c < labels.num_classes; ++c) {
    if (static_cast<int>(by_class[c].size()) < spec.per_class_train) {
      throw std::invalid_argument(
          "split: class " + std::to_string(c + 1) + " has only " +
          std::to_string(by_class[c].size()) + " samples, need " +
          std::to_string(spec.per_class_train));
    }
  }
  Rng rng(spec.seed);
  std::vector<Eigen::Index> train, test;
  for (auto& idx : by_class) {
    rng.shuffle(idx);
    train.insert(train.end(), idx.begin(),
                 idx.begin() + spec.per_class_train);
    test.insert(test.end(), idx.begin() + spec.per_class_train, idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

MultiViewDataset take_rows(const MultiViewDataset& ds,
                           const std::vector<Eigen::Index>& rows) {
  MultiViewDataset out;
  out.views.reserve(ds.views.size());
  for (const auto& v : ds.views) {
    ViewMatrix sub;
    sub.name = v.name;
    sub.values.resize(static_cast<Eigen::Index>(rows.size()), v.dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      sub.values.row(static_cast<Eigen::Index>(r)) = v.values.row(rows[r]);
    }
    out.views.push_back(std::move(sub));
  }
  out.labels.num_classes = ds.labels.num_classes;
  out.labels.classes.reserve(rows.size());
  for (Eigen::Index r : rows) {
    out.labels.classes.push_back(ds.labels.classes[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::pair<MultiViewDataset, MultiViewDataset> stratified_split(
    const MultiViewDataset& ds, const SplitSpec& spec) {
  ds.validate();
  auto [train_idx, test_idx] = stratified_split_indices(ds.labels, spec);
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

LabelRemap remap_labels(const std::vector<int>& codes) {
  if (codes.empty()) {
    throw std::invalid_argument("remap_labels: no labeled samples");
  }
  std::map<int, int> mapping;  // original code -> contiguous id
  for (int code : codes) {
    if (code == 0) {
      throw std::invalid_argument("remap_labels: code 0 is reserved for unlabeled");
    }
    mapping.emplace(code, 0);
  }
  LabelRemap out;
  int next = 1;
  for (auto& [code, id] : mapping) {
    id = next++;
    out.original_ids.push_back(code);
  }
  out.labels.num_classes = next - 1;
  out.labels.classes.reserve(codes.size());
  for (int code : codes) out.labels.classes.push_back(mapping[code]);
  return out;
}

}  // namespace s3fse
