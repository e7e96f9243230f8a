#pragma once

#include "masp/image.hpp"

#include <vector>

namespace masp {

struct Point {
  Index x = 0;
  Index y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Border pixels in tracing order. Consecutive points are 8-neighbours.
struct Contour {
  std::vector<Point> points;
  bool is_outer = true;
};

struct DetectionFilters {
  double min_area_fraction = 0.001;
  /// Window-to-wall ratio cap.
  double max_area_fraction = 0.6;
  double aspect_min = 0.2;
  double aspect_max = 5.0;

  bool valid() const {
    return min_area_fraction > 0.0 && min_area_fraction < max_area_fraction &&
           max_area_fraction <= 1.0 && aspect_min < aspect_max;
  }
};

/// Suzuki-Abe border following (8-connected foreground, 4-connected
/// background). Emits outer and hole borders in raster order of their
/// starting pixel; exactly one outer border per foreground component.
std::vector<Contour> trace_contours(const BinaryImage& img);

/// Tight axis-aligned box. Throws Error for an empty contour.
WindowRegion bounding_box(const Contour& c);

/// Area/aspect filtering, then drops boxes contained in another survivor.
/// Result is sorted by (y, x).
std::vector<WindowRegion> filter_regions(const std::vector<WindowRegion>& boxes,
                                         const DetectionFilters& f, Index img_w, Index img_h);

}  // namespace masp
