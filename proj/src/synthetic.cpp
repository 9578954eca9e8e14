#include "s3fse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "s3fse/rng.hpp"

namespace s3fse {

namespace {
constexpr int kLatentDim = 10;
}

SyntheticDataset synth_generate(const SyntheticSpec& spec) {
  if (spec.n_per_class < 1 || spec.num_classes < 1) {
    throw std::invalid_argument("synth: counts must be positive");
  }
  if (spec.view_dims.empty()) {
    throw std::invalid_argument("synth: need at least one view");
  }
  for (int dv : spec.view_dims) {
    if (dv < 1) throw std::invalid_argument("synth: view dims must be >= 1");
  }
  if (spec.redundant_frac < 0.0 || spec.redundant_frac >= 1.0) {
    throw std::invalid_argument("synth: redundant_frac must be in [0, 1)");
  }
  if (spec.noise_sigma < 0.0) {
    throw std::invalid_argument("synth: noise_sigma must be >= 0");
  }

  Rng rng(spec.seed);
  const int n = spec.n_per_class * spec.num_classes;

  // One latent point per class; samples of the class differ only through
  // view-space noise.
  Eigen::MatrixXd latent(spec.num_classes, kLatentDim);
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int j = 0; j < kLatentDim; ++j) {
      latent(c, j) = spec.class_separation * rng.normal();
    }
  }

  SyntheticDataset out;
  out.data.labels.num_classes = spec.num_classes;
  out.data.labels.classes.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int i = 0; i < spec.n_per_class; ++i) {
      out.data.labels.classes.push_back(c + 1);
    }
  }

  for (std::size_t v = 0; v < spec.view_dims.size(); ++v) {
    const int dv = spec.view_dims[v];

    // View-specific rendering map with unit-norm columns, so the per-column
    // signal scale tracks class_separation.
    Eigen::MatrixXd map(kLatentDim, dv);
    for (int i = 0; i < kLatentDim; ++i) {
      for (int j = 0; j < dv; ++j) map(i, j) = rng.normal();
    }
    for (int j = 0; j < dv; ++j) {
      const double norm = map.col(j).norm();
      if (norm > 0) map.col(j) /= norm;
    }

    ViewMatrix view;
    view.name = "view" + std::to_string(v);
    view.values.resize(n, dv);
    for (int c = 0; c < spec.num_classes; ++c) {
      const Eigen::RowVectorXd base = latent.row(c) * map;
      for (int i = 0; i < spec.n_per_class; ++i) {
        const Eigen::Index row =
            static_cast<Eigen::Index>(c) * spec.n_per_class + i;
        for (int j = 0; j < dv; ++j) {
          view.values(row, j) = base[j] + spec.noise_sigma * rng.normal();
        }
      }
    }

    // Overwrite a fixed fraction of columns with pure noise.
    const auto n_noise = static_cast<std::size_t>(
        std::lround(spec.redundant_frac * dv));
    std::vector<Eigen::Index> cols(static_cast<std::size_t>(dv));
    for (int j = 0; j < dv; ++j) cols[static_cast<std::size_t>(j)] = j;
    rng.shuffle(cols);
    std::vector<Eigen::Index> noise_cols(cols.begin(),
                                         cols.begin() + static_cast<std::ptrdiff_t>(n_noise));
    std::sort(noise_cols.begin(), noise_cols.end());
    for (Eigen::Index j : noise_cols) {
      for (int i = 0; i < n; ++i) view.values(i, j) = rng.normal();
    }

    out.data.views.push_back(std::move(view));
    out.noise_columns.push_back(std::move(noise_cols));
  }
  out.data.validate();
  return out;
}

}  // namespace s3fse
