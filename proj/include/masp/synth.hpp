#pragma once

#include "masp/image.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace masp::synth {

/// Portable draws on top of mt19937_64 (std distributions differ between
/// standard libraries, which would break corpus reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [lo, hi].
  Index uniform_int(Index lo, Index hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<Index>(engine_() % span);
  }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Seed for the i-th item of a stream, independent of generation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// A window on the facade plane. (cx, cy) is the centre of its projection;
/// skew_deg rotates the window about its vertical axis away from the camera.
struct WindowSpec {
  double cx = 0.0;
  double cy = 0.0;
  Index w = 0;
  Index h = 0;
  int pane_rows = 1;
  int pane_cols = 1;
  double skew_deg = 0.0;
};

/// Axis-aligned box of a window's projected outline.
WindowRegion projected_box(const WindowSpec& ws);

struct SyntheticSpec {
  Index width = 640;
  Index height = 480;
  double wall_luma = 190.0;
  double noise_amp = 8.0;
  /// Dark-minus-wall luminance difference of the glazing.
  double contrast = 110.0;
  std::vector<WindowSpec> windows;
  /// Small window-like rectangles that are not windows (not ground truth).
  std::vector<WindowRegion> distractors;
  std::uint64_t noise_seed = 0;

  /// Throws Error if windows leave the frame, overlap, exceed 60% of the
  /// image in total, or use a skew outside [0, 75] degrees.
  void validate() const;
};

struct SyntheticImage {
  RgbImage image;
  /// Tight box of each window's rendered pixels, in spec order.
  std::vector<WindowRegion> truth;
  /// 255 where a window pixel was rendered.
  BinaryImage truth_mask;
};

SyntheticImage render(const SyntheticSpec& spec);

/// 1-4 front-facing (or uniformly skewed) windows with pane grids.
SyntheticSpec random_positive(Rng& rng, Index width, Index height, double skew_deg = 0.0);
/// Plain noisy wall.
SyntheticSpec random_blank(Rng& rng, Index width, Index height);
/// Wall with 1-4 small dark window-like rectangles.
SyntheticSpec random_distractor(Rng& rng, Index width, Index height);
/// Three evenly spaced front-facing windows.
SyntheticSpec three_window_facade(Index width, Index height, std::uint64_t noise_seed = 1);

enum class NegativeKind { Blank, Distractor, Mixed };

struct CorpusOptions {
  Index count = 30;
  std::uint64_t seed = 1;
  Index width = 640;
  Index height = 480;
  /// positives : negatives
  int positive_parts = 2;
  int negative_parts = 1;
  NegativeKind negatives = NegativeKind::Blank;
  double skew_deg = 0.0;
};

/// Number of positives in a corpus of `count` images (rounded to nearest).
Index positive_count(const CorpusOptions& opt);

/// The i-th corpus image; positives come first.
SyntheticImage corpus_image(const CorpusOptions& opt, Index i);

/// Writes img_NNNNN.ppm plus img_NNNNN.txt (one `x y w h` line per window)
/// for every image. Throws IoError.
void write_corpus(const std::string& dir, const CorpusOptions& opt);

std::string corpus_stem(Index i);

}  // namespace masp::synth
