#include "sigid/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sigid {

ProjectionProfile projection(const BinaryImage& img, ProfileAxis axis) {
  if (img.empty()) throw InvalidImageError("projection: empty input");
  ProjectionProfile p;
  p.axis = axis;
  if (axis == ProfileAxis::kRow) {
    p.counts.assign(img.height, 0.0);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        if (img.at(x, y)) p.counts[y] += 1.0;
  } else {
    p.counts.assign(img.width, 0.0);
    for (int x = 0; x < img.width; ++x)
      for (int y = 0; y < img.height; ++y)
        if (img.at(x, y)) p.counts[x] += 1.0;
  }
  return p;
}

ProjectionProfile smooth_profile(const ProjectionProfile& p, int window) {
  if (window < 1 || window % 2 == 0)
    throw ConfigError("smooth_profile: window must be odd and >= 1");
  if (window == 1) return p;
  ProjectionProfile out;
  out.axis = p.axis;
  const int n = static_cast<int>(p.counts.size());
  out.counts.assign(n, 0.0);
  const int half = window / 2;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int d = -half; d <= half; ++d) {
      const int j = std::clamp(i + d, 0, n - 1);
      sum += p.counts[j];
    }
    out.counts[i] = sum / window;
  }
  return out;
}

namespace {

struct Extent {
  int first = -1;
  int last = -1;
  bool valid() const { return first >= 0; }
  int span() const { return valid() ? last - first + 1 : 0; }
};

// Bounding extent of entries satisfying `pred`.
template <typename Pred>
Extent profile_extent(const std::vector<double>& counts, Pred pred) {
  Extent e;
  for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
    if (pred(counts[i])) {
      if (e.first < 0) e.first = i;
      e.last = i;
    }
  }
  return e;
}

struct MinMax {
  double min = 0, max = 0;
};

MinMax minmax_over(const std::vector<double>& counts, const Extent& e) {
  if (!e.valid()) return {};
  MinMax mm{counts[e.first], counts[e.first]};
  for (int i = e.first; i <= e.last; ++i) {
    mm.min = std::min(mm.min, counts[i]);
    mm.max = std::max(mm.max, counts[i]);
  }
  return mm;
}

struct CoreStats {
  double width = 0, height = 0, aspect = 0;
  double area_binary = 0, area_thinned = 0, area_hpr = 0;
  double narea_binary = 0, narea_thinned = 0, narea_hpr = 0;
  double cog_x = 0, cog_y = 0;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Width/height from the ">3 foreground pixels per column/row" rule, areas,
// normalized areas (clamped into [0,1]) and the binary center of gravity.
CoreStats core_stats(const ImageSet& set, const ProjectionProfile& rows,
                     const ProjectionProfile& cols) {
  CoreStats st;
  const Extent we = profile_extent(cols.counts, [](double c) { return c > 3.0; });
  const Extent he = profile_extent(rows.counts, [](double c) { return c > 3.0; });
  st.width = we.span();
  st.height = he.span();
  st.aspect = st.height > 0 ? st.width / st.height : 0.0;

  st.area_binary = static_cast<double>(set.binary.foreground_count());
  st.area_thinned = static_cast<double>(set.thinned.foreground_count());
  st.area_hpr = static_cast<double>(set.hpr.foreground_count());

  const double box = st.width * st.height;
  st.narea_binary = box > 0 ? clamp01(st.area_binary / box) : 0.0;
  st.narea_thinned = box > 0 ? clamp01(st.area_thinned / box) : 0.0;
  st.narea_hpr = box > 0 ? clamp01(st.area_hpr / box) : 0.0;

  if (st.area_binary > 0) {
    double sx = 0, sy = 0;
    for (int y = 0; y < set.binary.height; ++y)
      for (int x = 0; x < set.binary.width; ++x)
        if (set.binary.at(x, y)) {
          sx += x;
          sy += y;
        }
    st.cog_x = sx / st.area_binary;
    st.cog_y = sy / st.area_binary;
  }
  return st;
}

void check_image_set(const ImageSet& set, const char* who) {
  const int w = set.gray.width, h = set.gray.height;
  if (w < 1 || h < 1) throw InvalidImageError(std::string(who) + ": empty image set");
  auto same = [&](int ww, int hh) { return ww == w && hh == h; };
  if (!same(set.binary.width, set.binary.height) ||
      !same(set.thinned.width, set.thinned.height) ||
      !same(set.hpr.width, set.hpr.height))
    throw ShapeError(std::string(who) + ": rasters disagree on dimensions");
}

}  // namespace

GlobalFeatures extract_global(const ImageSet& set) {
  check_image_set(set, "extract_global");
  GlobalFeatures g;

  const ProjectionProfile rows = projection(set.binary, ProfileAxis::kRow);
  const ProjectionProfile cols = projection(set.binary, ProfileAxis::kColumn);
  const ProjectionProfile rows_sm = smooth_profile(rows, kProfileSmoothWindow);
  const ProjectionProfile cols_sm = smooth_profile(cols, kProfileSmoothWindow);

  const CoreStats st = core_stats(set, rows, cols);
  g.width = st.width;
  g.height = st.height;
  g.aspect_ratio = st.aspect;
  g.area_binary = st.area_binary;
  g.area_thinned = st.area_thinned;
  g.area_hpr = st.area_hpr;
  g.narea_binary = st.narea_binary;
  g.narea_thinned = st.narea_thinned;
  g.narea_hpr = st.narea_hpr;
  g.cog_x = st.cog_x;
  g.cog_y = st.cog_y;

  g.hproj_sum_binary = g.vproj_sum_binary = st.area_binary;
  g.hproj_sum_thinned = g.vproj_sum_thinned = st.area_thinned;

  // Profile max/min over the nonzero bounding extent of the raw profile; the
  // smoothed variants share the raw extent so both describe the same span.
  const Extent col_ext = profile_extent(cols.counts, [](double c) { return c > 0.0; });
  const Extent row_ext = profile_extent(rows.counts, [](double c) { return c > 0.0; });
  const MinMax v_mm = minmax_over(cols.counts, col_ext);
  const MinMax vs_mm = minmax_over(cols_sm.counts, col_ext);
  const MinMax h_mm = minmax_over(rows.counts, row_ext);
  const MinMax hs_mm = minmax_over(rows_sm.counts, row_ext);
  g.vproj_max = v_mm.max;
  g.vproj_min = v_mm.min;
  g.vproj_smoothed_max = vs_mm.max;
  g.vproj_smoothed_min = vs_mm.min;
  g.hproj_max = h_mm.max;
  g.hproj_min = h_mm.min;
  g.hproj_smoothed_max = hs_mm.max;
  g.hproj_smoothed_min = hs_mm.min;

  // Baseline: the unique row-profile peak, else the midpoint of the two
  // outermost maximal rows. Blank signature keeps every zone feature at 0.
  if (row_ext.valid()) {
    const double peak = h_mm.max;
    int first_peak = -1, last_peak = -1;
    for (int r = 0; r < static_cast<int>(rows.counts.size()); ++r) {
      if (rows.counts[r] == peak && rows.counts[r] > 0.0) {
        if (first_peak < 0) first_peak = r;
        last_peak = r;
      }
    }
    g.global_baseline = (first_peak + last_peak) / 2.0;

    // Edge limits: row of maximal |smoothed - raw| strictly above/below the
    // baseline, falling back to the baseline when a side is empty.
    auto edge_row = [&](bool above) {
      double best = -1.0;
      int best_row = -1;
      for (int r = 0; r < static_cast<int>(rows.counts.size()); ++r) {
        const bool on_side = above ? (r < g.global_baseline) : (r > g.global_baseline);
        if (!on_side) continue;
        const double diff = std::abs(rows_sm.counts[r] - rows.counts[r]);
        if (diff > best) {
          best = diff;
          best_row = r;
        }
      }
      return best_row < 0 ? g.global_baseline : static_cast<double>(best_row);
    };
    g.upper_edge_limit = edge_row(true);
    g.lower_edge_limit = edge_row(false);
    g.middle_zone = g.lower_edge_limit - g.upper_edge_limit;
  }
  return g;
}

std::vector<ImageSet> grid_partition(const ImageSet& set) {
  check_image_set(set, "grid_partition");
  const int w = set.gray.width, h = set.gray.height;
  if (w < kGridSize || h < kGridSize)
    throw InvalidImageError("grid_partition: image smaller than the 5x5 grid");

  auto boundary = [](int k, int dim) { return k * dim / kGridSize; };

  std::vector<ImageSet> cells;
  cells.reserve(kCellCount);
  for (int gy = 0; gy < kGridSize; ++gy) {
    const int y0 = boundary(gy, h), y1 = boundary(gy + 1, h);
    for (int gx = 0; gx < kGridSize; ++gx) {
      const int x0 = boundary(gx, w), x1 = boundary(gx + 1, w);
      const int cw = x1 - x0, ch = y1 - y0;
      ImageSet cell;
      cell.gray = GrayImage(cw, ch);
      cell.binary = BinaryImage(cw, ch);
      cell.thinned = BinaryImage(cw, ch);
      cell.hpr = BinaryImage(cw, ch);
      for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
          cell.gray.at(x, y) = set.gray.at(x0 + x, y0 + y);
          cell.binary.set(x, y, set.binary.at(x0 + x, y0 + y));
          cell.thinned.set(x, y, set.thinned.at(x0 + x, y0 + y));
          cell.hpr.set(x, y, set.hpr.at(x0 + x, y0 + y));
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

LocalFeatures extract_cell(const ImageSet& cell) {
  check_image_set(cell, "extract_cell");
  const ProjectionProfile rows = projection(cell.binary, ProfileAxis::kRow);
  const ProjectionProfile cols = projection(cell.binary, ProfileAxis::kColumn);
  const CoreStats st = core_stats(cell, rows, cols);

  LocalFeatures f;
  f.width = st.width;
  f.height = st.height;
  f.aspect_ratio = st.aspect;
  f.area_binary = st.area_binary;
  f.area_thinned = st.area_thinned;
  f.area_hpr = st.area_hpr;
  f.narea_binary = st.narea_binary;
  f.cog_x = st.cog_x;
  f.cog_y = st.cog_y;
  f.hproj_sum = st.area_binary;
  f.vproj_sum = st.area_binary;
  return f;
}

std::vector<LocalFeatures> extract_local(std::span<const ImageSet> cells) {
  if (cells.size() != kCellCount)
    throw ShapeError("extract_local: expected exactly 25 cells");
  std::vector<LocalFeatures> out;
  out.reserve(kCellCount);
  for (const auto& cell : cells) out.push_back(extract_cell(cell));
  return out;
}

std::array<double, kGlobalFeatureCount> GlobalFeatures::flatten() const {
  return {width,
          height,
          aspect_ratio,
          hproj_sum_binary,
          hproj_sum_thinned,
          vproj_sum_binary,
          vproj_sum_thinned,
          area_binary,
          area_thinned,
          area_hpr,
          narea_binary,
          narea_thinned,
          narea_hpr,
          cog_x,
          cog_y,
          vproj_max,
          vproj_min,
          vproj_smoothed_max,
          vproj_smoothed_min,
          hproj_max,
          hproj_min,
          hproj_smoothed_max,
          hproj_smoothed_min,
          global_baseline,
          upper_edge_limit,
          lower_edge_limit,
          middle_zone};
}

const std::array<const char*, kGlobalFeatureCount>& GlobalFeatures::names() {
  static const std::array<const char*, kGlobalFeatureCount> kNames = {
      "width",
      "height",
      "aspect_ratio",
      "hproj_sum_binary",
      "hproj_sum_thinned",
      "vproj_sum_binary",
      "vproj_sum_thinned",
      "area_binary",
      "area_thinned",
      "area_hpr",
      "narea_binary",
      "narea_thinned",
      "narea_hpr",
      "cog_x",
      "cog_y",
      "vproj_max",
      "vproj_min",
      "vproj_smoothed_max",
      "vproj_smoothed_min",
      "hproj_max",
      "hproj_min",
      "hproj_smoothed_max",
      "hproj_smoothed_min",
      "global_baseline",
      "upper_edge_limit",
      "lower_edge_limit",
      "middle_zone"};
  return kNames;
}

std::array<double, kLocalFeatureCount> LocalFeatures::flatten() const {
  return {width,   height, aspect_ratio, area_binary, area_thinned, area_hpr,
          narea_binary, cog_x,  cog_y,        hproj_sum,   vproj_sum};
}

const std::array<const char*, kLocalFeatureCount>& LocalFeatures::names() {
  static const std::array<const char*, kLocalFeatureCount> kNames = {
      "width",        "height", "aspect_ratio", "area_binary", "area_thinned",
      "area_hpr",     "narea_binary", "cog_x",  "cog_y",       "hproj_sum",
      "vproj_sum"};
  return kNames;
}

FeatureVec assemble(const GlobalFeatures& global,
                    std::span<const LocalFeatures> locals) {
  if (locals.size() != kCellCount)
    throw ShapeError("assemble: expected exactly 25 local records");
  FeatureVec v;
  v.reserve(kFeatureDim);
  for (double x : global.flatten()) v.push_back(x);
  for (const auto& lf : locals)
    for (double x : lf.flatten()) v.push_back(x);
  for (double x : v)
    if (!std::isfinite(x)) throw NumericError("assemble: non-finite feature");
  return v;
}

FeatureVec extract_features(const ImageSet& set) {
  const GlobalFeatures g = extract_global(set);
  const std::vector<ImageSet> cells = grid_partition(set);
  const std::vector<LocalFeatures> locals = extract_local(cells);
  return assemble(g, locals);
}

// ---- CSV export --------------------------------------------------------------

std::string feature_csv_header() {
  std::string h = "subject_id,sample_id";
  for (const char* name : GlobalFeatures::names()) {
    h += ",g_";
    h += name;
  }
  for (int cell = 0; cell < kCellCount; ++cell) {
    for (const char* name : LocalFeatures::names()) {
      h += ",c" + std::to_string(cell) + "_";
      h += name;
    }
  }
  return h;
}

void write_features_csv(std::ostream& out, std::span<const FeatureRecord> records) {
  out << feature_csv_header() << "\n";
  char buf[32];
  for (const auto& rec : records) {
    if (static_cast<int>(rec.values.size()) != kFeatureDim)
      throw ShapeError("write_features_csv: record is not 302-dimensional");
    out << rec.subject_id << "," << rec.sample_id;
    for (double v : rec.values) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace sigid
