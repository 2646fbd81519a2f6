#include "sigid/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sigid {

void validate(const PreprocessConfig& cfg) {
  if (cfg.target_width < 1 || cfg.target_height < 1)
    throw ConfigError("preprocess: target size must be >= 1");
  if (cfg.median_window < 1 || cfg.median_window % 2 == 0)
    throw ConfigError("preprocess: median window must be odd and >= 1");
  if (cfg.mean_window < 1 || cfg.mean_window % 2 == 0)
    throw ConfigError("preprocess: mean window must be odd and >= 1");
  if (!(cfg.hpr_factor > 0.0 && cfg.hpr_factor < 1.0))
    throw ConfigError("preprocess: hpr factor must lie in (0,1)");
}

GrayImage normalize_geometry(const GrayImage& img, const PreprocessConfig& cfg) {
  if (img.empty()) throw InvalidImageError("normalize_geometry: empty input");
  if (cfg.target_width < 1 || cfg.target_height < 1)
    throw ConfigError("normalize_geometry: target size must be >= 1");

  const int tw = cfg.target_width;
  const int th = cfg.target_height;
  const double s = std::min(static_cast<double>(tw) / img.width,
                            static_cast<double>(th) / img.height);
  const int cw = std::clamp(static_cast<int>(std::lround(img.width * s)), 1, tw);
  const int ch = std::clamp(static_cast<int>(std::lround(img.height * s)), 1, th);

  GrayImage out(tw, th, 255);
  for (int y = 0; y < ch; ++y) {
    const int sy = std::min(img.height - 1,
                            static_cast<int>(std::floor((y + 0.5) / s)));
    for (int x = 0; x < cw; ++x) {
      const int sx = std::min(img.width - 1,
                              static_cast<int>(std::floor((x + 0.5) / s)));
      out.at(x, y) = img.at(sx, sy);
    }
  }
  return out;
}

namespace {

inline int clamp_coord(int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); }

GrayImage median_filter(const GrayImage& img, int window) {
  if (window == 1) return img;
  const int half = window / 2;
  GrayImage out(img.width, img.height);
  std::vector<std::uint8_t> buf;
  buf.reserve(static_cast<std::size_t>(window) * window);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      buf.clear();
      for (int dy = -half; dy <= half; ++dy) {
        const int sy = clamp_coord(y + dy, img.height - 1);
        for (int dx = -half; dx <= half; ++dx) {
          const int sx = clamp_coord(x + dx, img.width - 1);
          buf.push_back(img.at(sx, sy));
        }
      }
      auto mid = buf.begin() + buf.size() / 2;
      std::nth_element(buf.begin(), mid, buf.end());
      out.at(x, y) = *mid;
    }
  }
  return out;
}

GrayImage mean_filter(const GrayImage& img, int window) {
  if (window == 1) return img;
  const int half = window / 2;
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      long sum = 0;
      for (int dy = -half; dy <= half; ++dy) {
        const int sy = clamp_coord(y + dy, img.height - 1);
        for (int dx = -half; dx <= half; ++dx) {
          const int sx = clamp_coord(x + dx, img.width - 1);
          sum += img.at(sx, sy);
        }
      }
      const long count = static_cast<long>(window) * window;
      out.at(x, y) = static_cast<std::uint8_t>(
          std::lround(static_cast<double>(sum) / count));
    }
  }
  return out;
}

}  // namespace

GrayImage denoise(const GrayImage& img, const PreprocessConfig& cfg) {
  if (img.empty()) throw InvalidImageError("denoise: empty input");
  if (cfg.median_window < 1 || cfg.median_window % 2 == 0)
    throw ConfigError("denoise: median window must be odd");
  if (cfg.mean_window < 1 || cfg.mean_window % 2 == 0)
    throw ConfigError("denoise: mean window must be odd");
  return mean_filter(median_filter(img, cfg.median_window), cfg.mean_window);
}

int otsu_threshold(const GrayImage& img) {
  if (img.empty()) throw InvalidImageError("otsu_threshold: empty input");
  std::array<std::int64_t, 256> hist{};
  for (auto v : img.data) ++hist[v];

  const std::int64_t total = static_cast<std::int64_t>(img.data.size());
  std::int64_t weighted_total = 0;
  for (int v = 0; v < 256; ++v) weighted_total += static_cast<std::int64_t>(v) * hist[v];

  int best_t = 0;
  double best_var = -1.0;
  std::int64_t w0 = 0;       // pixels with intensity <= t
  std::int64_t sum0 = 0;
  for (int t = 0; t < 256; ++t) {
    w0 += hist[t];
    sum0 += static_cast<std::int64_t>(t) * hist[t];
    const std::int64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) {
      if (best_var < 0.0) {
        best_var = 0.0;
        best_t = t;
      }
      continue;
    }
    const double mu0 = static_cast<double>(sum0) / w0;
    const double mu1 = static_cast<double>(weighted_total - sum0) / w1;
    const double between = static_cast<double>(w0) * static_cast<double>(w1) *
                           (mu0 - mu1) * (mu0 - mu1);
    if (between > best_var) {
      best_var = between;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize(const GrayImage& img) {
  if (img.empty()) throw InvalidImageError("binarize: empty input");
  const auto [lo, hi] = std::minmax_element(img.data.begin(), img.data.end());
  BinaryImage out(img.width, img.height, false);
  if (*lo == *hi) return out;  // constant image: no ink
  const int t = otsu_threshold(img);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = img.data[i] <= t ? 1 : 0;
  return out;
}

namespace {

// Zhang-Suen neighborhood, p2..p9 clockwise from north; off-image = background.
struct Neighborhood {
  std::array<int, 8> p;  // p[0] = p2 (N), ..., p[7] = p9 (NW)

  int black_count() const {
    int n = 0;
    for (int v : p) n += v;
    return n;
  }
  int transitions() const {  // 0 -> 1 patterns around the ring
    int n = 0;
    for (int i = 0; i < 8; ++i)
      if (p[i] == 0 && p[(i + 1) % 8] == 1) ++n;
    return n;
  }
};

inline Neighborhood neighborhood(const BinaryImage& img, int x, int y) {
  auto get = [&](int xx, int yy) -> int {
    if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) return 0;
    return img.at(xx, yy) ? 1 : 0;
  };
  return Neighborhood{{get(x, y - 1), get(x + 1, y - 1), get(x + 1, y),
                       get(x + 1, y + 1), get(x, y + 1), get(x - 1, y + 1),
                       get(x - 1, y), get(x - 1, y - 1)}};
}

}  // namespace

BinaryImage thin(const BinaryImage& img) {
  if (img.empty()) throw InvalidImageError("thin: empty input");
  BinaryImage cur = img;
  std::vector<std::pair<int, int>> to_delete;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int phase = 0; phase < 2; ++phase) {
      to_delete.clear();
      for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
          if (!cur.at(x, y)) continue;
          const Neighborhood nb = neighborhood(cur, x, y);
          const int b = nb.black_count();
          if (b < 2 || b > 6) continue;
          if (nb.transitions() != 1) continue;
          const int p2 = nb.p[0], p4 = nb.p[2], p6 = nb.p[4], p8 = nb.p[6];
          if (phase == 0) {
            if (p2 * p4 * p6 != 0) continue;
            if (p4 * p6 * p8 != 0) continue;
          } else {
            if (p2 * p4 * p8 != 0) continue;
            if (p2 * p6 * p8 != 0) continue;
          }
          to_delete.emplace_back(x, y);
        }
      }
      for (auto [x, y] : to_delete) cur.set(x, y, false);
      if (!to_delete.empty()) changed = true;
    }
  }
  return cur;
}

BinaryImage extract_hpr(const GrayImage& gray, const BinaryImage& binary,
                        const PreprocessConfig& cfg) {
  if (gray.width != binary.width || gray.height != binary.height)
    throw ShapeError("extract_hpr: gray/binary dimensions differ");
  if (!(cfg.hpr_factor > 0.0 && cfg.hpr_factor < 1.0))
    throw ConfigError("extract_hpr: factor must lie in (0,1)");

  int g_min = 256, g_max = -1;
  for (std::size_t i = 0; i < binary.data.size(); ++i) {
    if (!binary.data[i]) continue;
    const int v = gray.data[i];
    g_min = std::min(g_min, v);
    g_max = std::max(g_max, v);
  }
  BinaryImage out(gray.width, gray.height, false);
  if (g_max < 0 || g_min == g_max) return out;  // empty or flat foreground

  const double threshold = g_max - cfg.hpr_factor * (g_max - g_min);
  for (std::size_t i = 0; i < binary.data.size(); ++i)
    out.data[i] = (binary.data[i] && gray.data[i] <= threshold) ? 1 : 0;
  return out;
}

ImageSet preprocess(const GrayImage& raw, const PreprocessConfig& cfg) {
  validate(cfg);
  ImageSet set;
  set.gray = denoise(normalize_geometry(raw, cfg), cfg);
  set.binary = binarize(set.gray);
  set.thinned = thin(set.binary);
  set.hpr = extract_hpr(set.gray, set.binary, cfg);
  return set;
}

}  // namespace sigid
