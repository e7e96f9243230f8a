#include "masp/pipeline.hpp"

#include "masp/imgproc.hpp"

#include <chrono>

namespace masp {

namespace {

using Clock = std::chrono::steady_clock;

class StageClock {
 public:
  explicit StageClock(StageTimings& t) : timings_(t), last_(Clock::now()) {}

  void lap(Stage s) {
    const auto now = Clock::now();
    timings_[static_cast<std::size_t>(s)] +=
        std::chrono::duration<double, std::micro>(now - last_).count();
    last_ = now;
  }

 private:
  StageTimings& timings_;
  Clock::time_point last_;
};

Index probe_length(Index extent, const PipelineConfig& cfg) {
  return cfg.literal_kernel_mode ? std::max<Index>(1, extent - 8)
                                 : line_length(extent, cfg.kernel_divisor);
}

void check_frame(const RgbImage& img) {
  if (img.width < kMinFrameSide || img.height < kMinFrameSide)
    throw Error("detect_windows: frame must be at least 16x16");
  if (img.px.rows() != img.pixel_count()) throw Error("detect_windows: malformed image");
}

// Shared body of detect_windows and trace_detection.
std::vector<WindowRegion> run_detection(const RgbImage& img, const PipelineConfig& cfg,
                                        StageTimings& timing, DetectionTrace* trace) {
  check_frame(img);
  cfg.validate();
  StageClock clock(timing);

  GrayImage gray = to_grayscale(img);
  const std::uint8_t t = otsu_threshold(Histogram256::of(gray));
  // Binarize first, then flip so dark window pixels become foreground.
  BinaryImage inverted = invert(binarize(gray, t));
  clock.lap(Stage::Preprocess);

  BinaryImage horizontal =
      extract_lines_len(inverted, Orientation::Horizontal, probe_length(img.width, cfg));
  BinaryImage vertical =
      extract_lines_len(inverted, Orientation::Vertical, probe_length(img.height, cfg));
  clock.lap(Stage::Morphology);

  BinaryImage fused = fuse_weighted(horizontal, vertical, kDefaultLineWeight,
                                    kDefaultLineWeight, cfg.fuse_threshold);
  if (cfg.bridge_dilation) fused = dilate(fused, StructuringElement::rect(3, 3));
  clock.lap(Stage::Segment);

  std::vector<Contour> contours = trace_contours(fused);
  std::vector<WindowRegion> boxes;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (!contours[i].is_outer) continue;
    WindowRegion b = bounding_box(contours[i]);
    b.source_contour_id = static_cast<Index>(i);
    boxes.push_back(b);
  }
  clock.lap(Stage::Contour);

  std::vector<WindowRegion> regions = filter_regions(boxes, cfg.filters, img.width, img.height);
  clock.lap(Stage::Filter);

  if (trace) {
    trace->gray = std::move(gray);
    trace->threshold = t;
    trace->inverted = std::move(inverted);
    trace->horizontal = std::move(horizontal);
    trace->vertical = std::move(vertical);
    trace->fused = std::move(fused);
    trace->contours = std::move(contours);
    trace->regions = regions;
  }
  return regions;
}

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Preprocess: return "preprocess";
    case Stage::Morphology: return "morphology";
    case Stage::Segment: return "segment";
    case Stage::Contour: return "contour";
    case Stage::Filter: return "filter";
    case Stage::Scramble: return "scramble";
  }
  return "?";
}

std::vector<WindowRegion> detect_windows(const RgbImage& img, const PipelineConfig& cfg,
                                         StageTimings& timing) {
  return run_detection(img, cfg, timing, nullptr);
}

std::vector<WindowRegion> detect_windows(const RgbImage& img, const PipelineConfig& cfg) {
  StageTimings timing{};
  return run_detection(img, cfg, timing, nullptr);
}

DetectionTrace trace_detection(const RgbImage& img, const PipelineConfig& cfg) {
  DetectionTrace trace;
  StageTimings timing{};
  run_detection(img, cfg, timing, &trace);
  return trace;
}

FrameResult process_frame(const RgbImage& img, const PipelineConfig& cfg,
                          const std::string& image_id) {
  const auto start = Clock::now();
  FrameResult res;
  res.regions = run_detection(img, cfg, res.timing, nullptr);

  StageClock clock(res.timing);
  res.output = img;
  res.record.image_id = image_id;
  res.record.width = img.width;
  res.record.height = img.height;
  res.record.master = cfg.chaos;
  for (std::size_t i = 0; i < res.regions.size(); ++i) {
    const Index idx = static_cast<Index>(i);
    const RegionSeed seed = derive_region_seed(cfg.chaos, idx);
    const WindowRegion& r = res.regions[i];
    const RegionKey key = build_region_key(cfg.chaos.with_seed(seed.x0, seed.y0), r.area());
    scramble_region_inplace(res.output, r, key);
    res.record.regions.push_back({idx, r, seed});
  }
  clock.lap(Stage::Scramble);
  res.total_us = std::chrono::duration<double, std::micro>(Clock::now() - start).count();
  return res;
}

RgbImage descramble_frame(const RgbImage& img, const ScrambleRecord& record) {
  if (record.width != img.width || record.height != img.height)
    throw RecordError("descramble: record is for a " + std::to_string(record.width) + "x" +
                      std::to_string(record.height) + " image, got " +
                      std::to_string(img.width) + "x" + std::to_string(img.height));
  try {
    record.master.validate();
  } catch (const Error& e) {
    throw RecordError(std::string("descramble: ") + e.what());
  }
  for (const auto& r : record.regions)
    if (!r.region.inside(img.width, img.height))
      throw RecordError("descramble: region " + std::to_string(r.index) + " is out of bounds");

  RgbImage out = img;
  for (auto it = record.regions.rbegin(); it != record.regions.rend(); ++it) {
    const ChaosParams p = record.master.with_seed(it->seed.x0, it->seed.y0);
    descramble_region_inplace(out, it->region, build_region_key(p, it->region.area()));
  }
  return out;
}

}  // namespace masp
