#ifndef SIGID_IMAGE_IO_HPP_
#define SIGID_IMAGE_IO_HPP_

#include <filesystem>

#include "sigid/image.hpp"

namespace sigid {

/// Binary PGM ("P5"), 8-bit only.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Binary rasters are written with foreground = 0 (ink) and background = 255.
void write_pgm(const BinaryImage& img, const std::filesystem::path& path);

/// 8-bit grayscale PNG (other PNG color types are converted to gray on read).
GrayImage read_png(const std::filesystem::path& path);

/// Dispatch on the file's magic bytes (PGM "P5" or PNG signature).
GrayImage read_gray(const std::filesystem::path& path);

}  // namespace sigid

#endif  // SIGID_IMAGE_IO_HPP_
