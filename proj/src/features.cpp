#include "s3fse/features.hpp"

#include <cmath>
#include <stdexcept>

namespace s3fse {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Sign convention shared by PCA image extraction: the largest-magnitude
// entry of each eigenvector is made positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0) v = -v;
}

Eigen::MatrixXd pixel_matrix(const HyperspectralCube& cube) {
  const Eigen::Index n = cube.pixels();
  Eigen::MatrixXd X(n, cube.bands);
  for (int b = 0; b < cube.bands; ++b) {
    for (Eigen::Index p = 0; p < n; ++p) {
      X(p, b) = cube.data[static_cast<std::size_t>(b) * n + p];
    }
  }
  return X;
}

}  // namespace

std::vector<Image> pca_images(const HyperspectralCube& cube, int q) {
  cube.validate();
  if (q < 1 || q > cube.bands) {
    throw std::invalid_argument("pca_images: q must be in [1, bands]");
  }
  if (cube.pixels() < 2) {
    throw std::invalid_argument("pca_images: need at least 2 pixels");
  }
  const Eigen::Index n = cube.pixels();
  Eigen::MatrixXd X = pixel_matrix(cube);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  X.rowwise() -= mean;
  const Eigen::MatrixXd cov =
      X.transpose() * X / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("pca_images: eigendecomposition failed");
  }
  std::vector<Image> images;
  images.reserve(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    Eigen::VectorXd axis = es.eigenvectors().col(cube.bands - 1 - i);
    fix_sign(axis);
    const Eigen::VectorXd scores = X * axis;
    Image img(cube.height, cube.width);
    for (int y = 0; y < cube.height; ++y) {
      for (int x = 0; x < cube.width; ++x) {
        img(y, x) = scores[static_cast<Eigen::Index>(y) * cube.width + x];
      }
    }
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<Eigen::MatrixXcd> make_gabor_bank(const GaborBankSpec& spec) {
  if (spec.kernel_size < 1 || spec.kernel_size % 2 == 0) {
    throw std::invalid_argument("gabor: kernel_size must be odd and positive");
  }
  if (spec.scales.empty() || spec.directions.empty()) {
    throw std::invalid_argument("gabor: scales and directions must be non-empty");
  }
  const int r = (spec.kernel_size - 1) / 2;
  std::vector<Eigen::MatrixXcd> bank;
  bank.reserve(spec.scales.size() * spec.directions.size());
  for (int s : spec.scales) {
    const double lambda = 4.0 * std::pow(2.0, 0.5 * s);
    const double sigma = 0.56 * lambda;
    for (int d : spec.directions) {
      const double theta = d * kPi / 12.0;
      const double ct = std::cos(theta), st = std::sin(theta);
      Eigen::MatrixXd re(spec.kernel_size, spec.kernel_size);
      Eigen::MatrixXd im(spec.kernel_size, spec.kernel_size);
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const double xr = dx * ct + dy * st;
          const double yr = -dx * st + dy * ct;
          const double env =
              std::exp(-(xr * xr + yr * yr) / (2.0 * sigma * sigma));
          const double phase = 2.0 * kPi * xr / lambda;
          re(dy + r, dx + r) = env * std::cos(phase);
          im(dy + r, dx + r) = env * std::sin(phase);
        }
      }
      re.array() -= re.mean();  // DC compensation
      Eigen::MatrixXcd k(spec.kernel_size, spec.kernel_size);
      k.real() = re;
      k.imag() = im;
      bank.push_back(std::move(k));
    }
  }
  return bank;
}

ViewMatrix gabor_texture(const HyperspectralCube& cube,
                         const GaborBankSpec& spec) {
  cube.validate();
  if (spec.kernel_size > cube.width || spec.kernel_size > cube.height) {
    throw std::invalid_argument("gabor: kernel larger than image");
  }
  const Image pc1 = pca_images(cube, 1).front();
  const auto bank = make_gabor_bank(spec);
  const int rows = cube.height, cols = cube.width;
  const int r = (spec.kernel_size - 1) / 2;

  ViewMatrix out;
  out.name = "texture";
  out.values.resize(static_cast<Eigen::Index>(rows) * cols,
                    static_cast<Eigen::Index>(bank.size()));
  for (std::size_t f = 0; f < bank.size(); ++f) {
    const Eigen::MatrixXcd& k = bank[f];
    for (int y = 0; y < rows; ++y) {
      for (int x = 0; x < cols; ++x) {
        double acc_re = 0.0, acc_im = 0.0;
        for (int dy = -r; dy <= r; ++dy) {
          const int yy = reflect_index(y + dy, rows);
          for (int dx = -r; dx <= r; ++dx) {
            const double v = pc1(yy, reflect_index(x + dx, cols));
            acc_re += k(dy + r, dx + r).real() * v;
            acc_im += k(dy + r, dx + r).imag() * v;
          }
        }
        out.values(static_cast<Eigen::Index>(y) * cols + x,
                   static_cast<Eigen::Index>(f)) = std::hypot(acc_re, acc_im);
      }
    }
  }
  return out;
}

ViewMatrix dmp_features(const HyperspectralCube& cube, const DmpSpec& spec) {
  cube.validate();
  if (spec.radii.empty()) {
    throw std::invalid_argument("dmp: radii must be non-empty");
  }
  for (std::size_t i = 1; i < spec.radii.size(); ++i) {
    if (spec.radii[i] <= spec.radii[i - 1]) {
      throw std::invalid_argument("dmp: radii must be strictly increasing");
    }
  }
  if (spec.radii.front() < 1) {
    throw std::invalid_argument("dmp: radii must be >= 1");
  }
  if (spec.num_pcs < 1 || spec.num_pcs > cube.bands) {
    throw std::invalid_argument("dmp: num_pcs must be in [1, bands]");
  }
  const auto pcs = pca_images(cube, spec.num_pcs);
  const Eigen::Index n = cube.pixels();
  const int per_pc = 2 * static_cast<int>(spec.radii.size());

  ViewMatrix out;
  out.name = "dmp";
  out.values.resize(n, static_cast<Eigen::Index>(spec.num_pcs) * per_pc);
  for (int pc = 0; pc < spec.num_pcs; ++pc) {
    const Image& img = pcs[static_cast<std::size_t>(pc)];
    Image prev_open = img, prev_close = img;
    for (std::size_t ri = 0; ri < spec.radii.size(); ++ri) {
      const Image o = morph_open(img, spec.radii[ri]);
      const Image c = morph_close(img, spec.radii[ri]);
      const Image open_diff = (o - prev_open).cwiseAbs();
      const Image close_diff = (c - prev_close).cwiseAbs();
      const Eigen::Index col_o = pc * per_pc + static_cast<Eigen::Index>(ri);
      const Eigen::Index col_c = col_o + static_cast<Eigen::Index>(spec.radii.size());
      for (int y = 0; y < cube.height; ++y) {
        for (int x = 0; x < cube.width; ++x) {
          const Eigen::Index p = static_cast<Eigen::Index>(y) * cube.width + x;
          out.values(p, col_o) = open_diff(y, x);
          out.values(p, col_c) = close_diff(y, x);
        }
      }
      prev_open = o;
      prev_close = c;
    }
  }
  return out;
}

ViewMatrix spectral_view(const HyperspectralCube& cube) {
  cube.validate();
  ViewMatrix out;
  out.name = "spectral";
  out.values = pixel_matrix(cube);
  return out;
}

}  // namespace s3fse
