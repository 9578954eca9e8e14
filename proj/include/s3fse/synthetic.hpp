#ifndef S3FSE_SYNTHETIC_HPP
#define S3FSE_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "s3fse/types.hpp"

namespace s3fse {

// Multi-view generator for desk-scale experiments. Every sample of a class
// shares one latent point; each view renders the latent through a fixed
// random linear map plus Gaussian noise, and a redundant_frac fraction of
// each view's columns is overwritten with pure noise. The indices of those
// columns are recorded as ground truth.
struct SyntheticSpec {
  int n_per_class = 40;
  int num_classes = 4;
  std::vector<int> view_dims = {30, 20, 25};
  double class_separation = 3.0;
  double noise_sigma = 0.5;
  double redundant_frac = 0.4;  // in [0, 1)
  std::uint64_t seed = 0;
};

struct SyntheticDataset {
  MultiViewDataset data;
  std::vector<std::vector<Eigen::Index>> noise_columns;  // per view, ascending
};

SyntheticDataset synth_generate(const SyntheticSpec& spec);

}  // namespace s3fse

#endif
