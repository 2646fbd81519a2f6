#ifndef SIGID_PREPROCESS_HPP_
#define SIGID_PREPROCESS_HPP_

#include "sigid/image.hpp"

namespace sigid {

/// Scale into a target_width x target_height canvas with a single factor
/// s = min(tw/w, th/h), nearest-neighbor sampled, content anchored top-left,
/// the rest padded with background white (255). Aspect ratio is preserved.
GrayImage normalize_geometry(const GrayImage& img, const PreprocessConfig& cfg);

/// Median filter followed by mean filter, both square windows with
/// replicate-edge padding. Windows must be odd.
GrayImage denoise(const GrayImage& img, const PreprocessConfig& cfg);

/// Global Otsu threshold over the 256-bin histogram; a pixel is foreground
/// iff its intensity <= T (ink is dark). A constant image binarizes to all
/// background.
BinaryImage binarize(const GrayImage& img);

/// Otsu threshold value itself (for diagnostics and cross-checks): the
/// smallest t in [0,255] maximizing between-class variance of the split
/// {intensity <= t} / {intensity > t}.
int otsu_threshold(const GrayImage& img);

/// Zhang-Suen two-subiteration thinning iterated to a fixed point.
/// Output foreground is a subset of the input's.
BinaryImage thin(const BinaryImage& img);

/// High-pressure region: with g_min/g_max the intensity range over the
/// foreground of `binary`, keep foreground pixels whose intensity is
/// <= g_max - factor * (g_max - g_min). A constant-intensity foreground
/// (g_min == g_max) yields an empty mask.
BinaryImage extract_hpr(const GrayImage& gray, const BinaryImage& binary,
                        const PreprocessConfig& cfg);

/// Full chain: normalize -> denoise -> binarize -> thin -> HPR.
ImageSet preprocess(const GrayImage& raw, const PreprocessConfig& cfg);

}  // namespace sigid

#endif  // SIGID_PREPROCESS_HPP_
