#ifndef SIGID_FEATURES_HPP_
#define SIGID_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sigid/image.hpp"

namespace sigid {

inline constexpr int kGridSize = 5;                      // 5x5 local grid
inline constexpr int kCellCount = kGridSize * kGridSize;
inline constexpr int kGlobalFeatureCount = 27;
inline constexpr int kLocalFeatureCount = 11;
inline constexpr int kFeatureDim =
    kGlobalFeatureCount + kCellCount * kLocalFeatureCount;  // 302
inline constexpr int kProfileSmoothWindow = 5;

using FeatureVec = std::vector<double>;

enum class ProfileAxis { kRow, kColumn };

/// Per-row or per-column foreground pixel counts.
struct ProjectionProfile {
  ProfileAxis axis = ProfileAxis::kRow;
  std::vector<double> counts;
};

ProjectionProfile projection(const BinaryImage& img, ProfileAxis axis);

/// Centered moving average with replicate-edge padding; window must be odd.
/// Window 1 is the identity.
ProjectionProfile smooth_profile(const ProjectionProfile& p, int window);

/// Whole-raster scalar features. Width/height use the ">3 foreground pixels
/// per column/row" extent rule; profile max/min are taken over the nonzero
/// bounding extent of the raw profile so canvas padding cannot force a zero.
struct GlobalFeatures {
  double width = 0;
  double height = 0;
  double aspect_ratio = 0;
  double hproj_sum_binary = 0;
  double hproj_sum_thinned = 0;
  double vproj_sum_binary = 0;
  double vproj_sum_thinned = 0;
  double area_binary = 0;
  double area_thinned = 0;
  double area_hpr = 0;
  double narea_binary = 0;
  double narea_thinned = 0;
  double narea_hpr = 0;
  double cog_x = 0;
  double cog_y = 0;
  double vproj_max = 0;
  double vproj_min = 0;
  double vproj_smoothed_max = 0;
  double vproj_smoothed_min = 0;
  double hproj_max = 0;
  double hproj_min = 0;
  double hproj_smoothed_max = 0;
  double hproj_smoothed_min = 0;
  double global_baseline = 0;
  double upper_edge_limit = 0;
  double lower_edge_limit = 0;
  double middle_zone = 0;

  std::array<double, kGlobalFeatureCount> flatten() const;
  static const std::array<const char*, kGlobalFeatureCount>& names();
};

/// The same style of scalars computed on one grid cell; cog is cell-local.
struct LocalFeatures {
  double width = 0;
  double height = 0;
  double aspect_ratio = 0;
  double area_binary = 0;
  double area_thinned = 0;
  double area_hpr = 0;
  double narea_binary = 0;
  double cog_x = 0;
  double cog_y = 0;
  double hproj_sum = 0;
  double vproj_sum = 0;

  std::array<double, kLocalFeatureCount> flatten() const;
  static const std::array<const char*, kLocalFeatureCount>& names();
};

GlobalFeatures extract_global(const ImageSet& set);

/// 5x5 tiling with boundaries floor(k*dim/5); cells are disjoint and cover
/// every pixel. Throws InvalidImageError for images smaller than 5x5.
std::vector<ImageSet> grid_partition(const ImageSet& set);

LocalFeatures extract_cell(const ImageSet& cell);
std::vector<LocalFeatures> extract_local(std::span<const ImageSet> cells);

/// Layout: 27 globals, then 25 local blocks of 11 in row-major grid order.
FeatureVec assemble(const GlobalFeatures& global,
                    std::span<const LocalFeatures> locals);

/// extract_global + grid_partition + extract_local + assemble.
FeatureVec extract_features(const ImageSet& set);

// ---- CSV export ------------------------------------------------------------

struct FeatureRecord {
  int subject_id = 0;
  int sample_id = 0;
  FeatureVec values;
};

/// "subject_id,sample_id,g_width,...,c24_vproj_sum"
std::string feature_csv_header();
void write_features_csv(std::ostream& out, std::span<const FeatureRecord> records);

}  // namespace sigid

#endif  // SIGID_FEATURES_HPP_
