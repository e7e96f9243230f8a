#include "masp/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace masp {

double iou(const WindowRegion& a, const WindowRegion& b) {
  const Index ix = std::max<Index>(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const Index iy = std::max<Index>(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = static_cast<double>(ix) * static_cast<double>(iy);
  const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Histogram256 Histogram256::of(const GrayImage& img) {
  Histogram256 h;
  const std::uint8_t* p = img.px.data();
  const Index n = img.px.size();
  for (Index i = 0; i < n; ++i) ++h.counts[p[i]];
  h.total = static_cast<std::uint64_t>(n);
  return h;
}

StructuringElement StructuringElement::rect(Index w, Index h) {
  if (w < 1 || h < 1) throw Error("StructuringElement: dimensions must be >= 1");
  return {w, h, w / 2, h / 2};
}

StructuringElement StructuringElement::reflected() const {
  return {width, height, width - 1 - anchor_x, height - 1 - anchor_y};
}

GrayImage to_grayscale(const RgbImage& img) {
  const Eigen::Vector3d weights(kLumaR, kLumaG, kLumaB);
  const Eigen::ArrayXd luma =
      (img.px.cast<double>().matrix() * weights).array().round().max(0.0).min(255.0);
  Plane<std::uint8_t> out(img.height, img.width);
  Eigen::Map<Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>>(out.data(), out.size()) =
      luma.cast<std::uint8_t>();
  return GrayImage(std::move(out));
}

std::uint8_t otsu_threshold(const Histogram256& h) {
  if (h.total == 0) throw Error("otsu_threshold: empty histogram");

  // Weighted within-class variance times N equals
  //   sum(i^2) - s0^2/n0 - s1^2/n1
  // so the minimizer maximizes s0^2/n0 + s1^2/n1 (empty class contributes 0).
  long double sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += static_cast<long double>(i) * h.counts[i];

  std::uint64_t n0 = 0;
  long double s0 = 0;
  long double best = -1;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += h.counts[t];
    s0 += static_cast<long double>(t) * h.counts[t];
    const std::uint64_t n1 = h.total - n0;
    const long double s1 = sum_all - s0;
    long double score = 0;
    if (n0 > 0) score += s0 * s0 / static_cast<long double>(n0);
    if (n1 > 0) score += s1 * s1 / static_cast<long double>(n1);
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return static_cast<std::uint8_t>(best_t);
}

BinaryImage binarize(const GrayImage& img, std::uint8_t t) {
  return BinaryImage(
      (img.px > t).select(Plane<std::uint8_t>::Constant(img.height(), img.width(), 255),
                          Plane<std::uint8_t>::Zero(img.height(), img.width())));
}

GrayImage invert(const GrayImage& img) {
  return GrayImage(Plane<std::uint8_t>(std::uint8_t{255} - img.px));
}

BinaryImage invert(const BinaryImage& img) {
  return BinaryImage(Plane<std::uint8_t>(std::uint8_t{255} - img.px));
}

namespace {

enum class MorphOp { Erode, Dilate };

// One pass of a 1-D rectangular probe over every line of a plane. `line_len`
// and `stride` address elements along the line, `count`/`step` walk lines.
void morph_lines(const std::uint8_t* in, std::uint8_t* out, Index lines, Index line_step,
                 Index line_len, Index stride, Index probe, Index anchor, MorphOp op,
                 bool border_on) {
  std::vector<Index> prefix(static_cast<std::size_t>(line_len) + 1);
  for (Index l = 0; l < lines; ++l) {
    const std::uint8_t* src = in + l * line_step;
    std::uint8_t* dst = out + l * line_step;
    prefix[0] = 0;
    for (Index i = 0; i < line_len; ++i)
      prefix[i + 1] = prefix[i] + (src[i * stride] == BinaryImage::kOn ? 1 : 0);

    for (Index i = 0; i < line_len; ++i) {
      const Index lo = i - anchor;
      const Index hi = lo + probe;
      const Index clo = std::max<Index>(lo, 0);
      const Index chi = std::min<Index>(hi, line_len);
      const Index inside = chi > clo ? chi - clo : 0;
      const Index ones = inside > 0 ? prefix[chi] - prefix[clo] : 0;
      const Index outside = probe - inside;
      bool on;
      if (op == MorphOp::Erode)
        on = ones + (border_on ? outside : 0) == probe;
      else
        on = ones > 0 || (border_on && outside > 0);
      dst[i * stride] = on ? BinaryImage::kOn : BinaryImage::kOff;
    }
  }
}

// Rectangles are separable: a row pass with (w x 1) then a column pass with
// (1 x h) equals the full rectangle under a constant border.
BinaryImage morph(const BinaryImage& img, const StructuringElement& se, Border border,
                  MorphOp op) {
  if (se.width < 1 || se.height < 1) throw Error("morphology: structuring element is empty");
  const bool border_on = border == Border::Foreground;
  const Index w = img.width();
  const Index h = img.height();

  Plane<std::uint8_t> cur = img.px;
  if (se.width > 1) {
    Plane<std::uint8_t> next(h, w);
    morph_lines(cur.data(), next.data(), h, w, w, 1, se.width, se.anchor_x, op, border_on);
    cur.swap(next);
  }
  if (se.height > 1) {
    Plane<std::uint8_t> next(h, w);
    morph_lines(cur.data(), next.data(), w, 1, h, w, se.height, se.anchor_y, op, border_on);
    cur.swap(next);
  }
  return BinaryImage(std::move(cur));
}

}  // namespace

BinaryImage erode(const BinaryImage& img, const StructuringElement& se, Border border) {
  return morph(img, se, border, MorphOp::Erode);
}

BinaryImage dilate(const BinaryImage& img, const StructuringElement& se, Border border) {
  return morph(img, se, border, MorphOp::Dilate);
}

BinaryImage open(const BinaryImage& img, const StructuringElement& se) {
  return dilate(erode(img, se), se.reflected());
}

Index line_length(Index extent, int divisor) {
  if (divisor < 1) throw Error("line_length: divisor must be >= 1");
  return std::max<Index>(3, extent / divisor);
}

BinaryImage extract_lines_len(const BinaryImage& img, Orientation o, Index length) {
  length = std::max<Index>(1, length);
  const auto se = o == Orientation::Horizontal ? StructuringElement::rect(length, 1)
                                               : StructuringElement::rect(1, length);
  return open(img, se);
}

BinaryImage extract_lines(const BinaryImage& img, Orientation o, int divisor) {
  const Index extent = o == Orientation::Horizontal ? img.width() : img.height();
  return extract_lines_len(img, o, line_length(extent, divisor));
}

BinaryImage fuse_weighted(const BinaryImage& h, const BinaryImage& v, double w_h, double w_v,
                          int threshold) {
  if (h.width() != v.width() || h.height() != v.height())
    throw Error("fuse_weighted: image dimensions differ");
  const Plane<double> combined =
      (w_h * h.px.cast<double>() + w_v * v.px.cast<double>()).round();
  return BinaryImage(
      (combined >= static_cast<double>(threshold))
          .select(Plane<std::uint8_t>::Constant(h.height(), h.width(), 255),
                  Plane<std::uint8_t>::Zero(h.height(), h.width())));
}

}  // namespace masp
