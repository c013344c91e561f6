// SPDX-License-Identifier: Apache-2.0

#include "sklp/silhouette.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sklp/errors.hpp"
#include "sklp/io.hpp"

namespace sklp {

Eigen::Index SilhouetteImage::foreground() const {
  return pixels.cast<Eigen::Index>().sum();
}

void RadonConfig::validate() const {
  if (angle_bins < 1) throw std::invalid_argument("angle_bins must be >= 1");
  if (displacement_bins && *displacement_bins < 3) throw std::invalid_argument("displacement_bins must be >= 3");
}

int RadonConfig::displacement_bins_for(const SilhouetteImage& image) const {
  if (displacement_bins) return *displacement_bins;
  const double diag = std::hypot(static_cast<double>(image.height()), static_cast<double>(image.width()));
  return std::max(3, static_cast<int>(std::ceil(diag)) | 1);
}

namespace {

class PgmReader {
public:
  explicit PgmReader(const std::string& bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token, skipping '#' comments.
  std::string token() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) && bytes_[pos_] != '#') ++pos_;
    return bytes_.substr(start, pos_ - start);
  }

  long number(const char* what) {
    const std::string t = token();
    if (t.empty()) throw DataError(std::string("malformed PGM header: missing ") + what);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || v < 0) throw DataError(std::string("malformed PGM header: bad ") + what + " '" + t + "'");
    return v;
  }

  std::size_t& pos() { return pos_; }
  const std::string& bytes() const { return bytes_; }

private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

SilhouetteImage parse_pgm(const std::string& bytes) {
  PgmReader reader(bytes);
  const std::string magic = reader.token();
  if (magic != "P2" && magic != "P5") throw DataError("malformed PGM header: unsupported magic '" + magic + "'");
  const long width = reader.number("width");
  const long height = reader.number("height");
  const long maxval = reader.number("maxval");
  if (width == 0 || height == 0) throw DataError("malformed PGM header: zero dimension");
  if (maxval == 0 || maxval > 65535) throw DataError("unsupported PGM maxval " + std::to_string(maxval));

  SilhouetteImage image;
  image.pixels.resize(height, width);
  if (magic == "P2") {
    for (long i = 0; i < height; ++i) {
      for (long j = 0; j < width; ++j) {
        const std::string t = reader.token();
        if (t.empty()) {
          throw DataError("truncated PGM payload at pixel " + std::to_string(i * width + j));
        }
        std::size_t used = 0;
        long v = -1;
        try {
          v = std::stol(t, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != t.size() || v < 0 || v > maxval) throw DataError("invalid PGM pixel value '" + t + "'");
        image.pixels(i, j) = v > 0 ? 1 : 0;
      }
    }
    return image;
  }

  if (maxval > 255) throw DataError("unsupported PGM maxval " + std::to_string(maxval) + " for P5 (max 255)");
  std::size_t& pos = reader.pos();
  if (pos >= bytes.size()) throw DataError("truncated PGM payload at byte offset " + std::to_string(pos));
  ++pos;  // single whitespace after maxval
  const std::size_t needed = static_cast<std::size_t>(width * height);
  if (bytes.size() - pos < needed) {
    throw DataError("truncated PGM payload at byte offset " + std::to_string(bytes.size()) + " (expected " +
                    std::to_string(pos + needed) + " bytes)");
  }
  for (long i = 0; i < height; ++i) {
    for (long j = 0; j < width; ++j) {
      image.pixels(i, j) = static_cast<unsigned char>(bytes[pos + static_cast<std::size_t>(i * width + j)]) > 0 ? 1 : 0;
    }
  }
  return image;
}

SilhouetteImage load_pgm(const std::filesystem::path& path) {
  try {
    return parse_pgm(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_pgm(const SilhouetteImage& image, const std::filesystem::path& path) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  for (Eigen::Index i = 0; i < image.height(); ++i) {
    for (Eigen::Index j = 0; j < image.width(); ++j) out.push_back(image.pixels(i, j) ? static_cast<char>(255) : '\0');
  }
  io::write_atomic(path, out);
}

RadonSinogram radon(const SilhouetteImage& image, const RadonConfig& config) {
  config.validate();
  const int bins = config.displacement_bins_for(image);
  const int angles = config.angle_bins;
  RadonSinogram out{Eigen::MatrixXd::Zero(bins, angles)};
  if (image.foreground() == 0) return out;

  // Bounding-box centre of the foreground: a half-integer, so relative
  // coordinates are exact and unchanged by integer translations.
  Eigen::Index i_min = image.height(), i_max = -1, j_min = image.width(), j_max = -1;
  for (Eigen::Index j = 0; j < image.width(); ++j) {
    for (Eigen::Index i = 0; i < image.height(); ++i) {
      if (!image.pixels(i, j)) continue;
      i_min = std::min(i_min, i);
      i_max = std::max(i_max, i);
      j_min = std::min(j_min, j);
      j_max = std::max(j_max, j);
    }
  }
  const double ci = 0.5 * static_cast<double>(i_min + i_max);
  const double cj = 0.5 * static_cast<double>(j_min + j_max);

  const double half = 0.5 * std::hypot(static_cast<double>(image.height()), static_cast<double>(image.width()));
  const double step = 2.0 * half / (bins - 1);
  for (int a = 0; a < angles; ++a) {
    const double theta = a * std::numbers::pi / angles;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (Eigen::Index j = 0; j < image.width(); ++j) {
      for (Eigen::Index i = 0; i < image.height(); ++i) {
        if (!image.pixels(i, j)) continue;
        const double r = (static_cast<double>(i) - ci) * c + (static_cast<double>(j) - cj) * s;
        const auto bin = static_cast<Eigen::Index>(std::floor((r + half) / step + 0.5));
        out.values(std::clamp<Eigen::Index>(bin, 0, bins - 1), a) += 1.0;
      }
    }
  }
  return out;
}

Eigen::VectorXd r_transform(const RadonSinogram& sinogram) {
  const Eigen::VectorXd column_energy = sinogram.values.array().square().colwise().sum().transpose();
  const double total = column_energy.sum();
  if (!(total > 0.0)) throw DataError("R-transform of an empty silhouette (all-zero sinogram)");
  return column_energy / total;
}

Eigen::MatrixXd sequence_features(std::span<const std::filesystem::path> frames, const RadonConfig& config) {
  if (frames.empty()) throw DataError("sequence has no frames");
  config.validate();
  Eigen::MatrixXd out(config.angle_bins, static_cast<Eigen::Index>(frames.size()));
  for (std::size_t f = 0; f < frames.size(); ++f) {
    try {
      out.col(static_cast<Eigen::Index>(f)) = r_transform(radon(load_pgm(frames[f]), config));
    } catch (const DataError& e) {
      throw DataError("frame " + std::to_string(f) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sklp
