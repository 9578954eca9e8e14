#include "s3fse/morphology.hpp"

#include <stdexcept>

namespace s3fse {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  if (radius < 0) throw std::invalid_argument("disk_offsets: negative radius");
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dy, dx);
    }
  }
  return offsets;
}

int reflect_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

namespace {

enum class Op { min, max };

Image rank_filter(const Image& img, int radius, Op op) {
  const auto offsets = disk_offsets(radius);
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  Image out(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      double v = img(reflect_index(y + offsets[0].first, rows),
                     reflect_index(x + offsets[0].second, cols));
      for (std::size_t i = 1; i < offsets.size(); ++i) {
        const double w = img(reflect_index(y + offsets[i].first, rows),
                             reflect_index(x + offsets[i].second, cols));
        if (op == Op::min ? (w < v) : (w > v)) v = w;
      }
      out(y, x) = v;
    }
  }
  return out;
}

}  // namespace

Image erode(const Image& img, int radius) {
  return rank_filter(img, radius, Op::min);
}

Image dilate(const Image& img, int radius) {
  return rank_filter(img, radius, Op::max);
}

Image morph_open(const Image& img, int radius) {
  return dilate(erode(img, radius), radius);
}

Image morph_close(const Image& img, int radius) {
  return erode(dilate(img, radius), radius);
}

}  // namespace s3fse
