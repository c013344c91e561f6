// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sklp {

/// Binary silhouette, 1 = foreground.
struct SilhouetteImage {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> pixels;  // H x W

  Eigen::Index height() const { return pixels.rows(); }
  Eigen::Index width() const { return pixels.cols(); }
  Eigen::Index foreground() const;
};

struct RadonConfig {
  int angle_bins = 180;
  /// Unset: ceil(sqrt(H^2 + W^2)) forced odd.
  std::optional<int> displacement_bins;

  void validate() const;
  int displacement_bins_for(const SilhouetteImage& image) const;
};

/// displacement_bins x angle_bins line-integral counts.
struct RadonSinogram {
  Eigen::MatrixXd values;
};

/// Reads PGM P2 (ASCII) or P5 (binary, maxval <= 255); pixels > 0 are foreground.
SilhouetteImage load_pgm(const std::filesystem::path& path);
SilhouetteImage parse_pgm(const std::string& bytes);

/// Writes a binary P5 image with maxval 255.
void save_pgm(const SilhouetteImage& image, const std::filesystem::path& path);

/// Discrete Radon transform with nearest-bin assignment. Pixel coordinates are
/// measured from the centre of the foreground bounding box, theta_a = a pi / A,
/// and displacement bins span [-diag/2, diag/2] uniformly.
RadonSinogram radon(const SilhouetteImage& image, const RadonConfig& config);

/// x(theta) = sum_rho T^2(rho, theta) / sum_rho sum_theta T^2. Throws
/// DataError on an all-zero sinogram.
Eigen::VectorXd r_transform(const RadonSinogram& sinogram);

/// One R-transform column per frame, in input order (angle_bins x F).
Eigen::MatrixXd sequence_features(std::span<const std::filesystem::path> frames, const RadonConfig& config);

}  // namespace sklp
