#include "sigid/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <string>

namespace sigid {

namespace {

// Skips PGM whitespace and '#' comments, then parses one unsigned int token.
int next_pgm_int(std::istream& in, const std::filesystem::path& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c))
    throw IoError("pgm: malformed header in " + path.string());
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 30) throw IoError("pgm: absurd header value in " + path.string());
    c = in.get();
  }
  if (c != EOF) in.unget();
  return value;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    throw IoError("pgm: not a binary P5 file: " + path.string());

  const int width = next_pgm_int(in, path);
  const int height = next_pgm_int(in, path);
  const int maxval = next_pgm_int(in, path);
  if (width < 1 || height < 1)
    throw IoError("pgm: bad dimensions in " + path.string());
  if (maxval < 1 || maxval > 255)
    throw IoError("pgm: only 8-bit files supported: " + path.string());
  in.get();  // single whitespace separating header from raster

  GrayImage img(width, height);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
    throw IoError("pgm: truncated raster in " + path.string());
  return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidImageError("write_pgm: empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot write " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw IoError("pgm: write failed for " + path.string());
}

void write_pgm(const BinaryImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw InvalidImageError("write_pgm: empty image");
  GrayImage gray(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    gray.data[i] = img.data[i] ? 0 : 255;
  write_pgm(gray, path);
}

GrayImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IoError("png: cannot open " + path.string() + ": " + image.message);

  image.format = PNG_FORMAT_GRAY;
  if (image.width < 1 || image.height < 1) {
    png_image_free(&image);
    throw IoError("png: bad dimensions in " + path.string());
  }
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, img.data.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("png: decode failed for " + path.string() + ": " + message);
  }
  return img;
}

GrayImage read_gray(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char magic[8] = {};
  in.read(reinterpret_cast<char*>(magic), 8);
  in.close();

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (std::equal(png_sig, png_sig + 8, magic)) return read_png(path);
  if (magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
  throw IoError("unsupported raster format: " + path.string());
}

}  // namespace sigid
