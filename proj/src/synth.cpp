#include "masp/synth.hpp"

#include "masp/ppm.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace masp::synth {

namespace {

struct Projection {
  double cos_t = 1.0;
  double sin_t = 0.0;
  double depth = 1.0;  // camera distance to the window centre

  explicit Projection(const WindowSpec& ws) {
    const double t = ws.skew_deg * std::numbers::pi / 180.0;
    cos_t = std::cos(t);
    sin_t = std::sin(t);
    depth = 1.5 * static_cast<double>(ws.w);
  }

  // Facade-plane (u, v), origin at the window centre -> image offset.
  double to_x(double u) const { return depth * u * cos_t / (depth + u * sin_t); }
  double to_y(double u, double v) const { return depth * v / (depth + u * sin_t); }
  // Image offset -> facade-plane coordinates.
  double to_u(double x) const { return x * depth / (depth * cos_t - x * sin_t); }
  double to_v(double u, double y) const { return y * (depth + u * sin_t) / depth; }
};

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

bool boxes_overlap(const WindowRegion& a, const WindowRegion& b, Index margin) {
  return a.x < b.right() + margin && b.x < a.right() + margin && a.y < b.bottom() + margin &&
         b.y < a.bottom() + margin;
}

enum class Paint { Wall, Frame, Glass };

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

WindowRegion projected_box(const WindowSpec& ws) {
  const Projection pr(ws);
  const double hw = static_cast<double>(ws.w) / 2.0;
  const double hh = static_cast<double>(ws.h) / 2.0;
  const double x_lo = pr.to_x(-hw);
  const double x_hi = pr.to_x(hw);
  const double y_hi = std::max(pr.to_y(-hw, hh), pr.to_y(hw, hh));
  const Index x0 = static_cast<Index>(std::floor(ws.cx + x_lo));
  const Index x1 = static_cast<Index>(std::ceil(ws.cx + x_hi));
  const Index y0 = static_cast<Index>(std::floor(ws.cy - y_hi));
  const Index y1 = static_cast<Index>(std::ceil(ws.cy + y_hi));
  return {x0, y0, x1 - x0, y1 - y0};
}

void SyntheticSpec::validate() const {
  if (width < 16 || height < 16) throw Error("synthetic spec: image too small");
  double total = 0.0;
  std::vector<WindowRegion> boxes;
  for (const auto& ws : windows) {
    if (ws.w < 1 || ws.h < 1 || ws.pane_rows < 1 || ws.pane_cols < 1)
      throw Error("synthetic spec: degenerate window");
    if (ws.skew_deg < 0.0 || ws.skew_deg > 75.0)
      throw Error("synthetic spec: skew must lie in [0, 75] degrees");
    const WindowRegion b = projected_box(ws);
    if (!b.inside(width, height)) throw Error("synthetic spec: window outside the image");
    for (const auto& o : boxes)
      if (boxes_overlap(b, o, 0)) throw Error("synthetic spec: windows overlap");
    boxes.push_back(b);
    total += static_cast<double>(b.area());
  }
  if (total > 0.6 * static_cast<double>(width * height))
    throw Error("synthetic spec: windows exceed 60% of the image");
  for (const auto& d : distractors)
    if (!d.inside(width, height)) throw Error("synthetic spec: distractor outside the image");
}

SyntheticImage render(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticImage out{RgbImage(spec.width, spec.height), {},
                     BinaryImage(spec.width, spec.height)};
  Rng noise(spec.noise_seed);

  // Per-channel tints keep the facade from being perfectly grey.
  const double tint_r = noise.uniform(-12.0, 12.0);
  const double tint_b = noise.uniform(-12.0, 12.0);
  const double wall[3] = {spec.wall_luma + tint_r, spec.wall_luma, spec.wall_luma + tint_b};
  const double glass = spec.wall_luma - spec.contrast;
  const double frame = glass - 15.0;

  Plane<std::uint8_t> paint = Plane<std::uint8_t>::Zero(spec.height, spec.width);
  Plane<float> shade = Plane<float>::Zero(spec.height, spec.width);

  for (const auto& ws : spec.windows) {
    const Projection pr(ws);
    const WindowRegion box = projected_box(ws);
    const double hw = static_cast<double>(ws.w) / 2.0;
    const double hh = static_cast<double>(ws.h) / 2.0;
    const double frame_t = std::max(2.0, std::round(0.04 * std::min(ws.w, ws.h)));
    const double mullion_t = 1.5;

    Index min_x = box.right(), min_y = box.bottom(), max_x = -1, max_y = -1;
    for (Index y = box.y; y < box.bottom(); ++y) {
      for (Index x = box.x; x < box.right(); ++x) {
        const double u = pr.to_u(static_cast<double>(x) + 0.5 - ws.cx);
        const double v = pr.to_v(u, static_cast<double>(y) + 0.5 - ws.cy);
        if (std::abs(u) > hw || std::abs(v) > hh) continue;

        bool bar = hw - std::abs(u) < frame_t || hh - std::abs(v) < frame_t;
        for (int c = 1; c < ws.pane_cols && !bar; ++c)
          bar = std::abs(u + hw - 2.0 * hw * c / ws.pane_cols) < mullion_t;
        for (int r = 1; r < ws.pane_rows && !bar; ++r)
          bar = std::abs(v + hh - 2.0 * hh * r / ws.pane_rows) < mullion_t;

        paint(y, x) = static_cast<std::uint8_t>(bar ? Paint::Frame : Paint::Glass);
        // Sky reflection: glazing brightens slightly towards the top.
        shade(y, x) = static_cast<float>(bar ? 0.0 : 10.0 * (0.5 - (v + hh) / (2.0 * hh)));
        out.truth_mask(x, y) = BinaryImage::kOn;
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
    if (max_x >= 0) out.truth.push_back({min_x, min_y, max_x - min_x + 1, max_y - min_y + 1});
  }

  for (const auto& d : spec.distractors) {
    const Index ft = std::max<Index>(1, std::min(d.w, d.h) / 10);
    for (Index y = d.y; y < d.bottom(); ++y)
      for (Index x = d.x; x < d.right(); ++x) {
        const bool edge = x - d.x < ft || d.right() - 1 - x < ft || y - d.y < ft ||
                          d.bottom() - 1 - y < ft;
        paint(y, x) = static_cast<std::uint8_t>(edge ? Paint::Frame : Paint::Glass);
      }
  }

  const double amp = spec.noise_amp;
  for (Index y = 0; y < spec.height; ++y) {
    for (Index x = 0; x < spec.width; ++x) {
      auto px = out.image.pixel(x, y);
      const auto kind = static_cast<Paint>(paint(y, x));
      for (int c = 0; c < 3; ++c) {
        double base;
        switch (kind) {
          case Paint::Wall: base = wall[c]; break;
          case Paint::Frame: base = frame; break;
          default: base = glass + shade(y, x) + (c == 2 ? 8.0 : (c == 0 ? -4.0 : 0.0)); break;
        }
        px(c) = clamp_byte(base + noise.uniform(-amp, amp));
      }
    }
  }
  return out;
}

namespace {

// Rejection-samples up to `count` non-overlapping windows.
void place_windows(Rng& rng, SyntheticSpec& spec, Index count, double w_lo, double w_hi,
                   double h_lo, double h_hi, double skew) {
  const Index margin = 12;
  const Index edge = 8;
  std::vector<WindowRegion> placed;
  for (Index attempt = 0; attempt < 400 && static_cast<Index>(spec.windows.size()) < count;
       ++attempt) {
    WindowSpec ws;
    ws.w = rng.uniform_int(static_cast<Index>(w_lo * spec.width),
                           static_cast<Index>(w_hi * spec.width));
    ws.h = rng.uniform_int(static_cast<Index>(h_lo * spec.height),
                           static_cast<Index>(h_hi * spec.height));
    ws.pane_rows = static_cast<int>(rng.uniform_int(1, 3));
    ws.pane_cols = static_cast<int>(rng.uniform_int(1, 3));
    ws.skew_deg = skew;

    const WindowRegion at_origin = projected_box(ws);  // centred on (0, 0)
    const Index bw = at_origin.w, bh = at_origin.h;
    if (bw + 2 * edge >= spec.width || bh + 2 * edge >= spec.height) continue;
    const Index left = rng.uniform_int(edge, spec.width - edge - bw);
    const Index top = rng.uniform_int(edge, spec.height - edge - bh);
    ws.cx = static_cast<double>(left - at_origin.x);
    ws.cy = static_cast<double>(top - at_origin.y);

    const WindowRegion box = projected_box(ws);
    if (!box.inside(spec.width, spec.height)) continue;
    if (std::any_of(placed.begin(), placed.end(),
                    [&](const WindowRegion& o) { return boxes_overlap(box, o, margin); }))
      continue;
    placed.push_back(box);
    spec.windows.push_back(ws);
  }
}

SyntheticSpec base_wall(Rng& rng, Index width, Index height) {
  SyntheticSpec spec;
  spec.width = width;
  spec.height = height;
  spec.wall_luma = rng.uniform(160.0, 225.0);
  spec.contrast = rng.uniform(95.0, std::min(140.0, spec.wall_luma - 20.0));
  spec.noise_amp = rng.uniform(3.0, 10.0);
  spec.noise_seed = rng.next();
  return spec;
}

}  // namespace

SyntheticSpec random_positive(Rng& rng, Index width, Index height, double skew_deg) {
  SyntheticSpec spec = base_wall(rng, width, height);
  if (skew_deg > 0.0) {
    // Foreshortening narrows skewed windows; start wider so they stay
    // inside the aspect limits.
    place_windows(rng, spec, rng.uniform_int(1, 2), 0.30, 0.42, 0.18, 0.30, skew_deg);
  } else {
    place_windows(rng, spec, rng.uniform_int(1, 4), 0.14, 0.28, 0.16, 0.38, 0.0);
  }
  return spec;
}

SyntheticSpec random_blank(Rng& rng, Index width, Index height) {
  return base_wall(rng, width, height);
}

SyntheticSpec random_distractor(Rng& rng, Index width, Index height) {
  SyntheticSpec spec = base_wall(rng, width, height);
  const Index n = rng.uniform_int(1, 4);
  for (Index attempt = 0; attempt < 200 && static_cast<Index>(spec.distractors.size()) < n;
       ++attempt) {
    WindowRegion d;
    d.w = rng.uniform_int(std::max<Index>(4, width / 40), std::max<Index>(5, width / 7));
    d.h = rng.uniform_int(std::max<Index>(4, height / 40), std::max<Index>(5, height / 7));
    if (d.w + 16 >= width || d.h + 16 >= height) continue;
    d.x = rng.uniform_int(8, width - 8 - d.w);
    d.y = rng.uniform_int(8, height - 8 - d.h);
    if (std::any_of(spec.distractors.begin(), spec.distractors.end(),
                    [&](const WindowRegion& o) { return boxes_overlap(d, o, 12); }))
      continue;
    spec.distractors.push_back(d);
  }
  return spec;
}

SyntheticSpec three_window_facade(Index width, Index height, std::uint64_t noise_seed) {
  SyntheticSpec spec;
  spec.width = width;
  spec.height = height;
  spec.wall_luma = 200.0;
  spec.contrast = 120.0;
  spec.noise_amp = 6.0;
  spec.noise_seed = noise_seed;
  for (const double fx : {0.2, 0.5, 0.8}) {
    WindowSpec ws;
    ws.w = static_cast<Index>(0.2 * static_cast<double>(width));
    ws.h = static_cast<Index>(0.3 * static_cast<double>(height));
    ws.cx = std::round(fx * static_cast<double>(width));
    ws.cy = std::round(0.45 * static_cast<double>(height));
    ws.pane_rows = 2;
    ws.pane_cols = 2;
    spec.windows.push_back(ws);
  }
  return spec;
}

Index positive_count(const CorpusOptions& opt) {
  const int parts = opt.positive_parts + opt.negative_parts;
  if (opt.positive_parts < 0 || opt.negative_parts < 0 || parts == 0)
    throw Error("corpus: invalid positive:negative ratio");
  return (opt.count * opt.positive_parts * 2 + parts) / (2 * parts);
}

SyntheticImage corpus_image(const CorpusOptions& opt, Index i) {
  Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(i)));
  const Index positives = positive_count(opt);
  if (i < positives) return render(random_positive(rng, opt.width, opt.height, opt.skew_deg));
  const Index neg = i - positives;
  const bool distractor = opt.negatives == NegativeKind::Distractor ||
                          (opt.negatives == NegativeKind::Mixed && neg % 2 == 1);
  return render(distractor ? random_distractor(rng, opt.width, opt.height)
                           : random_blank(rng, opt.width, opt.height));
}

std::string corpus_stem(Index i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "img_%05ld", static_cast<long>(i));
  return buf;
}

void write_corpus(const std::string& dir, const CorpusOptions& opt) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  for (Index i = 0; i < opt.count; ++i) {
    const SyntheticImage s = corpus_image(opt, i);
    const auto stem = (std::filesystem::path(dir) / corpus_stem(i)).string();
    write_ppm(stem + ".ppm", s.image);
    std::ofstream gt(stem + ".txt");
    if (!gt) throw IoError("cannot write '" + stem + ".txt'");
    for (const auto& b : s.truth) gt << b.x << ' ' << b.y << ' ' << b.w << ' ' << b.h << '\n';
    if (!gt) throw IoError("failed writing '" + stem + ".txt'");
  }
}

}  // namespace masp::synth
