#ifndef S3FSE_TYPES_HPP
#define S3FSE_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace s3fse {

// Raster cube: band-sequential storage, row-major within each band.
// Element (x, y, b) lives at data[b*width*height + y*width + x].
struct HyperspectralCube {
  int width = 0;
  int height = 0;
  int bands = 0;
  std::vector<float> data;

  int pixels() const { return width * height; }

  float at(int x, int y, int b) const {
    return data[static_cast<std::size_t>(b) * pixels() +
                static_cast<std::size_t>(y) * width + x];
  }
  float& at(int x, int y, int b) {
    return data[static_cast<std::size_t>(b) * pixels() +
                static_cast<std::size_t>(y) * width + x];
  }

  // Throws std::invalid_argument on size mismatch or non-finite values.
  void validate() const;
};

// One feature representation of the sample set. Rows are samples.
struct ViewMatrix {
  std::string name;        // spectral | texture | dmp | custom
  Eigen::MatrixXd values;  // n x d_v

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }

  void validate() const;
};

// Class ids are contiguous 1..C and every class occurs at least once.
struct LabelVector {
  std::vector<int> classes;
  int num_classes = 0;

  Eigen::Index n() const { return static_cast<Eigen::Index>(classes.size()); }

  void validate() const;
};

struct MultiViewDataset {
  std::vector<ViewMatrix> views;
  LabelVector labels;

  Eigen::Index n() const { return views.empty() ? 0 : views.front().n(); }
  int num_views() const { return static_cast<int>(views.size()); }
  Eigen::Index total_dim() const;

  void validate() const;
};

struct SplitSpec {
  int per_class_train = 30;
  std::uint64_t seed = 0;
};

}  // namespace s3fse

#endif
