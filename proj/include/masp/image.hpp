#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace masp {

using Eigen::Index;

/// Dense row-major raster plane; rows are image rows, columns image columns.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One row per pixel in raster order, one column per RGB channel.
using PixelRows = Eigen::Array<std::uint8_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

// Error hierarchy. The CLI maps IoError to exit 2 and RecordError to exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class RecordError : public Error {
 public:
  using Error::Error;
};

/// Interleaved 8-bit RGB image. px.rows() == width * height.
struct RgbImage {
  Index width = 0;
  Index height = 0;
  PixelRows px;

  RgbImage() = default;
  RgbImage(Index w, Index h) : width(w), height(h), px(PixelRows::Zero(w * h, 3)) {
    if (w < 1 || h < 1) throw Error("RgbImage: dimensions must be >= 1");
  }

  Index pixel_count() const { return width * height; }
  auto pixel(Index x, Index y) { return px.row(y * width + x); }
  auto pixel(Index x, Index y) const { return px.row(y * width + x); }

  const std::uint8_t* bytes() const { return px.data(); }
  std::uint8_t* bytes() { return px.data(); }
  Index byte_count() const { return px.size(); }

  friend bool operator==(const RgbImage& a, const RgbImage& b) {
    return a.width == b.width && a.height == b.height && (a.px == b.px).all();
  }
};

/// 8-bit luminance image.
struct GrayImage {
  Plane<std::uint8_t> px;

  GrayImage() = default;
  explicit GrayImage(Plane<std::uint8_t> p) : px(std::move(p)) {}
  GrayImage(Index w, Index h, std::uint8_t fill = 0)
      : px(Plane<std::uint8_t>::Constant(h, w, fill)) {}

  Index width() const { return px.cols(); }
  Index height() const { return px.rows(); }
  std::uint8_t& operator()(Index x, Index y) { return px(y, x); }
  std::uint8_t operator()(Index x, Index y) const { return px(y, x); }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.px.rows() == b.px.rows() && a.px.cols() == b.px.cols() && (a.px == b.px).all();
  }
};

/// Two-level image: 0 is background (wall), 255 is foreground (window).
struct BinaryImage {
  static constexpr std::uint8_t kOff = 0;
  static constexpr std::uint8_t kOn = 255;

  Plane<std::uint8_t> px;

  BinaryImage() = default;
  explicit BinaryImage(Plane<std::uint8_t> p) : px(std::move(p)) {}
  BinaryImage(Index w, Index h, std::uint8_t fill = kOff)
      : px(Plane<std::uint8_t>::Constant(h, w, fill)) {}

  Index width() const { return px.cols(); }
  Index height() const { return px.rows(); }
  std::uint8_t& operator()(Index x, Index y) { return px(y, x); }
  std::uint8_t operator()(Index x, Index y) const { return px(y, x); }
  bool on(Index x, Index y) const { return px(y, x) == kOn; }

  bool is_valid() const { return ((px == kOn) || (px == kOff)).all(); }

  friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return a.px.rows() == b.px.rows() && a.px.cols() == b.px.cols() && (a.px == b.px).all();
  }
};

/// Axis-aligned box of a detected window. source_contour_id indexes the
/// contour list it came from (-1 when not traced from a contour).
struct WindowRegion {
  Index x = 0;
  Index y = 0;
  Index w = 0;
  Index h = 0;
  Index source_contour_id = -1;

  Index area() const { return w * h; }
  Index right() const { return x + w; }
  Index bottom() const { return y + h; }

  bool contains(const WindowRegion& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  bool contains(Index px, Index py) const {
    return px >= x && py >= y && px < right() && py < bottom();
  }
  bool inside(Index img_w, Index img_h) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && right() <= img_w && bottom() <= img_h;
  }
  bool same_box(const WindowRegion& o) const {
    return x == o.x && y == o.y && w == o.w && h == o.h;
  }
};

/// Intersection-over-union of two boxes; 0 when either is empty.
double iou(const WindowRegion& a, const WindowRegion& b);

}  // namespace masp
