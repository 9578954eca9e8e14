#ifndef S3FSE_FEATURES_HPP
#define S3FSE_FEATURES_HPP

#include <vector>

#include <Eigen/Dense>

#include "s3fse/morphology.hpp"
#include "s3fse/types.hpp"

namespace s3fse {

// Gabor bank over scale indices s and direction indices d. Orientation is
// d*pi/12, wavelength 4*2^(s/2) pixels, envelope sigma 0.56*wavelength,
// aspect ratio 1. Kernels are DC-compensated: the real part has its mean
// subtracted, so flat regions give zero response.
struct GaborBankSpec {
  std::vector<int> scales = {0, 1, 2, 3, 4};
  std::vector<int> directions = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  int kernel_size = 31;  // odd

  int output_dim() const {
    return static_cast<int>(scales.size() * directions.size());
  }
};

struct DmpSpec {
  std::vector<int> radii = {2, 4, 6, 8};  // strictly increasing
  int num_pcs = 10;

  int output_dim() const {
    return num_pcs * 2 * static_cast<int>(radii.size());
  }
};

// Projections of each pixel's band vector onto the top-q eigenvectors of the
// band covariance matrix, ordered by descending eigenvalue. Each
// eigenvector's sign is fixed so its largest-magnitude entry is positive.
std::vector<Image> pca_images(const HyperspectralCube& cube, int q);

// The complex filter bank, scale-major (filter index = s*|directions| + d).
std::vector<Eigen::MatrixXcd> make_gabor_bank(const GaborBankSpec& spec);

// Per-pixel magnitudes of the complex filter responses on the first PC
// image, reflect-padded direct convolution. Rows in raster row-major order.
ViewMatrix gabor_texture(const HyperspectralCube& cube,
                         const GaborBankSpec& spec = {});

// Differential morphological profile of the first num_pcs PC images:
// per PC, |profile(r_k) - profile(r_{k-1})| for opening then closing
// profiles, with profile(0) = the PC image itself.
ViewMatrix dmp_features(const HyperspectralCube& cube, const DmpSpec& spec = {});

// Per-pixel band vector, raster row-major order.
ViewMatrix spectral_view(const HyperspectralCube& cube);

}  // namespace s3fse

#endif
