#include "masp/detection.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace masp {

namespace {

// Neighbour offsets, counter-clockwise on screen (y grows downwards).
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_to(Index fx, Index fy, Index tx, Index ty) {
  const int dx = static_cast<int>(tx - fx);
  const int dy = static_cast<int>(ty - fy);
  for (int d = 0; d < 8; ++d)
    if (kDx[d] == dx && kDy[d] == dy) return d;
  return 0;  // unreachable for 8-neighbours
}

}  // namespace

std::vector<Contour> trace_contours(const BinaryImage& img) {
  const Index w = img.width();
  const Index h = img.height();
  // Zero frame around the image so every neighbour lookup is in range.
  Plane<std::int32_t> f = Plane<std::int32_t>::Zero(h + 2, w + 2);
  f.block(1, 1, h, w) = (img.px == BinaryImage::kOn).cast<std::int32_t>();

  std::vector<Contour> contours;
  std::int32_t nbd = 1;

  for (Index y = 1; y <= h; ++y) {
    for (Index x = 1; x <= w; ++x) {
      const std::int32_t v = f(y, x);
      int start_dir;
      bool outer;
      if (v == 1 && f(y, x - 1) == 0) {
        outer = true;
        start_dir = 4;
      } else if (v >= 1 && f(y, x + 1) == 0) {
        outer = false;
        start_dir = 0;
      } else {
        continue;
      }
      ++nbd;

      Contour c;
      c.is_outer = outer;

      int found = -1;
      for (int k = 0; k < 8; ++k) {
        const int d = (start_dir - k + 8) % 8;
        if (f(y + kDy[d], x + kDx[d]) != 0) {
          found = d;
          break;
        }
      }
      if (found < 0) {
        f(y, x) = -nbd;
        c.points.push_back({x - 1, y - 1});
        contours.push_back(std::move(c));
        continue;
      }

      const Index x1 = x + kDx[found], y1 = y + kDy[found];
      Index x2 = x1, y2 = y1;
      Index x3 = x, y3 = y;
      while (true) {
        const int d2 = direction_to(x3, y3, x2, y2);
        bool east_zero = false;
        Index x4 = x2, y4 = y2;
        for (int k = 1; k <= 8; ++k) {
          const int d = (d2 + k) % 8;
          const Index nx = x3 + kDx[d], ny = y3 + kDy[d];
          if (f(ny, nx) != 0) {
            x4 = nx;
            y4 = ny;
            break;
          }
          if (d == 0) east_zero = true;
        }
        if (east_zero)
          f(y3, x3) = -nbd;
        else if (f(y3, x3) == 1)
          f(y3, x3) = nbd;
        c.points.push_back({x3 - 1, y3 - 1});

        if (x4 == x && y4 == y && x3 == x1 && y3 == y1) break;
        x2 = x3;
        y2 = y3;
        x3 = x4;
        y3 = y4;
      }
      contours.push_back(std::move(c));
    }
  }
  return contours;
}

WindowRegion bounding_box(const Contour& c) {
  if (c.points.empty()) throw Error("bounding_box: empty contour");
  Index min_x = c.points.front().x, max_x = min_x;
  Index min_y = c.points.front().y, max_y = min_y;
  for (const auto& p : c.points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

std::vector<WindowRegion> filter_regions(const std::vector<WindowRegion>& boxes,
                                         const DetectionFilters& f, Index img_w, Index img_h) {
  if (!f.valid()) throw Error("filter_regions: invalid detection filters");
  const double image_area = static_cast<double>(img_w) * static_cast<double>(img_h);

  std::vector<WindowRegion> kept;
  for (const auto& b : boxes) {
    const double frac = static_cast<double>(b.area()) / image_area;
    const double aspect = static_cast<double>(b.w) / static_cast<double>(b.h);
    if (frac < f.min_area_fraction || frac > f.max_area_fraction) continue;
    if (aspect < f.aspect_min || aspect > f.aspect_max) continue;
    kept.push_back(b);
  }

  std::vector<WindowRegion> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool nested = false;
    for (std::size_t j = 0; j < kept.size() && !nested; ++j) {
      if (i == j || !kept[j].contains(kept[i])) continue;
      // Identical boxes: the first one survives.
      nested = !kept[j].same_box(kept[i]) || j < i;
    }
    if (!nested) out.push_back(kept[i]);
  }
  std::stable_sort(out.begin(), out.end(), [](const WindowRegion& a, const WindowRegion& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return out;
}

}  // namespace masp
