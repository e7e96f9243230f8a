#pragma once

#include "masp/chaos.hpp"
#include "masp/detection.hpp"
#include "masp/image.hpp"
#include "masp/imgproc.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace masp {

struct PipelineConfig {
  /// Line probes are extent / kernel_divisor long (at least 3).
  int kernel_divisor = 8;
  /// Use extent - 8 as the probe length instead of extent / divisor.
  bool literal_kernel_mode = false;
  int fuse_threshold = kDefaultFuseThreshold;
  /// 3x3 dilation after fusion, closes gaps of up to 2 px.
  bool bridge_dilation = true;
  DetectionFilters filters;
  ChaosParams chaos;

  /// Throws Error on the first violated invariant.
  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Keys are the field
/// names above; filter and chaos fields may be written bare (`alpha`) or
/// qualified (`chaos.alpha`, `filters.aspect_min`). Throws Error.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::string& path);
std::string format_config(const PipelineConfig& cfg);

inline constexpr Index kMinFrameSide = 16;

enum class Stage { Preprocess, Morphology, Segment, Contour, Filter, Scramble };
inline constexpr std::size_t kStageCount = 6;
std::string_view stage_name(Stage s);

/// Per-stage wall time in microseconds.
using StageTimings = std::array<double, kStageCount>;

/// Grayscale -> Otsu -> binarize -> invert -> line extraction -> fusion
/// -> optional bridge -> contours -> boxes -> filters.
/// Throws Error for frames smaller than 16x16.
std::vector<WindowRegion> detect_windows(const RgbImage& img, const PipelineConfig& cfg);
std::vector<WindowRegion> detect_windows(const RgbImage& img, const PipelineConfig& cfg,
                                         StageTimings& timing);

/// Intermediate images of one detection run, for inspection and tests.
struct DetectionTrace {
  GrayImage gray;
  std::uint8_t threshold = 0;
  BinaryImage inverted;
  BinaryImage horizontal;
  BinaryImage vertical;
  BinaryImage fused;
  std::vector<Contour> contours;
  std::vector<WindowRegion> regions;
};
DetectionTrace trace_detection(const RgbImage& img, const PipelineConfig& cfg);

struct FrameResult {
  RgbImage output;
  std::vector<WindowRegion> regions;
  ScrambleRecord record;
  StageTimings timing{};
  /// End-to-end wall time of process_frame, microseconds.
  double total_us = 0.0;
};

FrameResult process_frame(const RgbImage& img, const PipelineConfig& cfg,
                          const std::string& image_id = "frame");

/// Undoes process_frame given its record; regions are restored in reverse
/// order. Throws RecordError if the record does not fit the image.
RgbImage descramble_frame(const RgbImage& img, const ScrambleRecord& record);

}  // namespace masp
