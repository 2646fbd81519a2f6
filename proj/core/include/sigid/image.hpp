#ifndef SIGID_IMAGE_HPP_
#define SIGID_IMAGE_HPP_

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sigid/errors.hpp"

namespace sigid {

/// 8-bit grayscale raster, row-major, intensity 0 = darkest ink, 255 = paper.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw InvalidImageError("GrayImage: dimensions must be >= 1");
  }

  bool empty() const { return width <= 0 || height <= 0; }

  std::uint8_t at(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return data[static_cast<std::size_t>(y) * width + x];
  }

  bool operator==(const GrayImage&) const = default;
};

/// Binary raster, row-major, value 1 = foreground (ink), 0 = background.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0 or 1 per pixel

  BinaryImage() = default;
  BinaryImage(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
    if (w < 1 || h < 1) throw InvalidImageError("BinaryImage: dimensions must be >= 1");
  }

  bool empty() const { return width <= 0 || height <= 0; }

  bool at(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return data[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (auto p : data) n += (p != 0);
    return n;
  }

  /// True when every foreground pixel of *this is foreground in `other`.
  bool subset_of(const BinaryImage& other) const {
    if (width != other.width || height != other.height) return false;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i] && !other.data[i]) return false;
    return true;
  }

  bool operator==(const BinaryImage&) const = default;
};

/// The four rasters derived from one signature scan. All share one geometry.
struct ImageSet {
  GrayImage gray;       // geometry-normalized, denoised
  BinaryImage binary;   // thresholded ink mask
  BinaryImage thinned;  // unit-width skeleton of `binary`
  BinaryImage hpr;      // high-pressure (darkest ink) region

  int width() const { return gray.width; }
  int height() const { return gray.height; }
};

struct PreprocessConfig {
  int target_width = 512;
  int target_height = 256;
  int median_window = 3;   // odd
  int mean_window = 3;     // odd
  double hpr_factor = 0.75;  // in (0,1); larger -> sparser high-pressure mask
};

/// Throws ConfigError on out-of-range parameters.
void validate(const PreprocessConfig& cfg);

}  // namespace sigid

#endif  // SIGID_IMAGE_HPP_
