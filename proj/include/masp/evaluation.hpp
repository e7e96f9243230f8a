#pragma once

#include "masp/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace masp {

inline constexpr double kMatchIou = 0.5;

/// One corpus image. A ground-truth window counts as detected when some
/// region overlaps it with IoU >= 0.5; a region with no such window is a
/// false region.
struct ImageEval {
  std::string name;
  Index truth_count = 0;
  Index detections = 0;
  Index matched_truth = 0;
  Index false_regions = 0;

  bool negative() const { return truth_count == 0; }
};

struct EvalReport {
  std::vector<ImageEval> rows;

  Index positives() const;
  Index negatives() const;
  Index truth_windows() const;
  Index matched_windows() const;
  Index flagged_negatives() const;
  Index detections() const;
  Index false_regions() const;

  /// matched / truth windows; empty without positives.
  std::optional<double> recall() const;
  /// Negative images with >= 1 detection / negative images; empty
  /// without negatives.
  std::optional<double> fpr() const;
};

ImageEval evaluate_image(const std::string& name, const std::vector<WindowRegion>& truth,
                         const std::vector<WindowRegion>& detected);

/// Reads every *.ppm with a sibling *.txt ground-truth file, in name
/// order, and runs detection with `jobs` worker threads. Throws IoError
/// when the corpus is empty or unreadable.
EvalReport evaluate_corpus(const std::string& dir, const PipelineConfig& cfg, int jobs = 1);

/// Ground truth: one `x y w h` line per window. Throws IoError.
std::vector<WindowRegion> read_boxes(const std::string& path);

void print_eval(std::ostream& out, const EvalReport& r);
void write_eval_csv(std::ostream& out, const EvalReport& r);

struct BenchReport {
  Index frames = 0;
  double wall_us = 0.0;
  StageTimings stage_mean_us{};

  double fps() const { return wall_us > 0.0 ? static_cast<double>(frames) * 1e6 / wall_us : 0.0; }
  double stage_sum_us() const;
};

/// process_frame `iterations` times on an already decoded frame.
/// Throws Error if iterations < 10.
BenchReport run_bench(const RgbImage& frame, const PipelineConfig& cfg, Index iterations);

void print_bench(std::ostream& out, const BenchReport& r);
void write_bench_csv(std::ostream& out, const BenchReport& r);

}  // namespace masp
