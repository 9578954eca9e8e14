#ifndef S3FSE_MORPHOLOGY_HPP
#define S3FSE_MORPHOLOGY_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace s3fse {

// Grayscale image, rows = y, cols = x.
using Image = Eigen::MatrixXd;

// Discrete disk: offsets (dy, dx) with dy^2 + dx^2 <= radius^2.
std::vector<std::pair<int, int>> disk_offsets(int radius);

// Symmetric reflect for out-of-range indices (-1 -> 0, n -> n-1).
int reflect_index(int i, int n);

// Flat min/max filters over the disk, reflect-padded boundaries.
Image erode(const Image& img, int radius);
Image dilate(const Image& img, int radius);
Image morph_open(const Image& img, int radius);
Image morph_close(const Image& img, int radius);

}  // namespace s3fse

#endif
