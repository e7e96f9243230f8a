#pragma once

#include "masp/image.hpp"

#include <array>
#include <cstdint>

namespace masp {

/// ITU-R BT.601 luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

struct Histogram256 {
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;

  static Histogram256 of(const GrayImage& img);
};

/// Rectangular, fully-set structuring element. The anchor is the footprint
/// cell placed over the output pixel.
struct StructuringElement {
  Index width = 1;
  Index height = 1;
  Index anchor_x = 0;
  Index anchor_y = 0;

  /// Centered rectangle, anchor = (floor(w/2), floor(h/2)).
  static StructuringElement rect(Index w, Index h);
  /// Mirror image through the anchor (same footprint for odd sizes).
  StructuringElement reflected() const;
};

/// Value assumed for pixels outside the image during morphology.
enum class Border { Background, Foreground };

enum class Orientation { Horizontal, Vertical };

GrayImage to_grayscale(const RgbImage& img);

/// Exhaustive search for the t minimizing w0(t)*var0(t) + w1(t)*var1(t),
/// classes are levels <= t and > t. Smallest minimizer wins.
/// Throws Error on an empty histogram.
std::uint8_t otsu_threshold(const Histogram256& h);

BinaryImage binarize(const GrayImage& img, std::uint8_t t);

/// 255 - value, per pixel.
GrayImage invert(const GrayImage& img);
BinaryImage invert(const BinaryImage& img);

BinaryImage erode(const BinaryImage& img, const StructuringElement& se,
                  Border border = Border::Background);
BinaryImage dilate(const BinaryImage& img, const StructuringElement& se,
                   Border border = Border::Background);

/// erode, then dilate with the reflected element (a true opening).
BinaryImage open(const BinaryImage& img, const StructuringElement& se);

/// Length of the line probe for an image extent: max(3, extent / divisor).
Index line_length(Index extent, int divisor);

/// Opening with a (len x 1) or (1 x len) element keeping only runs at least
/// len long in the given orientation, len = line_length(extent, divisor).
BinaryImage extract_lines(const BinaryImage& img, Orientation o, int divisor);
/// Same with an explicit probe length (clamped to >= 1).
BinaryImage extract_lines_len(const BinaryImage& img, Orientation o, Index length);

inline constexpr double kDefaultLineWeight = 0.5;
inline constexpr int kDefaultFuseThreshold = 64;

/// round(w_h*h + w_v*v) >= threshold -> 255. Throws Error on size mismatch.
BinaryImage fuse_weighted(const BinaryImage& h, const BinaryImage& v,
                          double w_h = kDefaultLineWeight, double w_v = kDefaultLineWeight,
                          int threshold = kDefaultFuseThreshold);

}  // namespace masp
