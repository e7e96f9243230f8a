#include "masp/evaluation.hpp"

#include "masp/ppm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace masp {

namespace fs = std::filesystem;

namespace {

template <typename F>
Index sum_rows(const std::vector<ImageEval>& rows, F f) {
  return std::accumulate(rows.begin(), rows.end(), Index{0},
                         [&](Index acc, const ImageEval& r) { return acc + f(r); });
}

std::string rate(const std::optional<double>& v) {
  if (!v) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << *v;
  return s.str();
}

}  // namespace

Index EvalReport::positives() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.negative() ? 0 : 1; });
}
Index EvalReport::negatives() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.negative() ? 1 : 0; });
}
Index EvalReport::truth_windows() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.truth_count; });
}
Index EvalReport::matched_windows() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.matched_truth; });
}
Index EvalReport::flagged_negatives() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.negative() && r.detections > 0; });
}
Index EvalReport::detections() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.detections; });
}
Index EvalReport::false_regions() const {
  return sum_rows(rows, [](const ImageEval& r) { return r.false_regions; });
}

std::optional<double> EvalReport::recall() const {
  const Index t = truth_windows();
  if (t == 0) return std::nullopt;
  return static_cast<double>(matched_windows()) / static_cast<double>(t);
}

std::optional<double> EvalReport::fpr() const {
  const Index n = negatives();
  if (n == 0) return std::nullopt;
  return static_cast<double>(flagged_negatives()) / static_cast<double>(n);
}

ImageEval evaluate_image(const std::string& name, const std::vector<WindowRegion>& truth,
                         const std::vector<WindowRegion>& detected) {
  ImageEval e;
  e.name = name;
  e.truth_count = static_cast<Index>(truth.size());
  e.detections = static_cast<Index>(detected.size());
  for (const auto& t : truth)
    if (std::any_of(detected.begin(), detected.end(),
                    [&](const WindowRegion& d) { return iou(t, d) >= kMatchIou; }))
      ++e.matched_truth;
  for (const auto& d : detected)
    if (std::none_of(truth.begin(), truth.end(),
                     [&](const WindowRegion& t) { return iou(t, d) >= kMatchIou; }))
      ++e.false_regions;
  return e;
}

std::vector<WindowRegion> read_boxes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<WindowRegion> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    WindowRegion b;
    if (!(ls >> b.x >> b.y >> b.w >> b.h)) throw IoError("bad box line in '" + path + "'");
    out.push_back(b);
  }
  return out;
}

EvalReport evaluate_corpus(const std::string& dir, const PipelineConfig& cfg, int jobs) {
  std::vector<fs::path> images;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    const fs::path p = it->path();
    if (p.extension() == ".ppm" && fs::exists(fs::path(p).replace_extension(".txt")))
      images.push_back(p);
  }
  if (ec) throw IoError("cannot read corpus '" + dir + "': " + ec.message());
  if (images.empty()) throw IoError("corpus '" + dir + "' has no annotated images");
  std::sort(images.begin(), images.end());

  EvalReport report;
  report.rows.resize(images.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < images.size();) {
      try {
        const RgbImage img = read_ppm(images[i].string());
        const auto truth = read_boxes(fs::path(images[i]).replace_extension(".txt").string());
        report.rows[i] = evaluate_image(images[i].stem().string(), truth,
                                        detect_windows(img, cfg));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = images.size();
      }
    }
  };

  const int n = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return report;
}

void print_eval(std::ostream& out, const EvalReport& r) {
  out << std::left << std::setw(22) << "images" << r.rows.size() << '\n'
      << std::setw(22) << "positives" << r.positives() << '\n'
      << std::setw(22) << "negatives" << r.negatives() << '\n'
      << std::setw(22) << "ground-truth windows" << r.truth_windows() << '\n'
      << std::setw(22) << "detected windows" << r.matched_windows() << '\n'
      << std::setw(22) << "recall" << rate(r.recall()) << '\n'
      << std::setw(22) << "flagged negatives" << r.flagged_negatives() << '\n'
      << std::setw(22) << "fpr (per image)" << rate(r.fpr()) << '\n'
      << std::setw(22) << "regions" << r.detections() << '\n'
      << std::setw(22) << "false regions" << r.false_regions() << '\n';
}

void write_eval_csv(std::ostream& out, const EvalReport& r) {
  out << "image,truth,detections,matched,false_regions\n";
  for (const auto& row : r.rows)
    out << row.name << ',' << row.truth_count << ',' << row.detections << ','
        << row.matched_truth << ',' << row.false_regions << '\n';
}

double BenchReport::stage_sum_us() const {
  return std::accumulate(stage_mean_us.begin(), stage_mean_us.end(), 0.0) *
         static_cast<double>(frames);
}

BenchReport run_bench(const RgbImage& frame, const PipelineConfig& cfg, Index iterations) {
  if (iterations < 10) throw Error("bench: at least 10 iterations are required");
  BenchReport rep;
  StageTimings totals{};
  for (Index i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const FrameResult res = process_frame(frame, cfg);
    rep.wall_us +=
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start)
            .count();
    for (std::size_t s = 0; s < kStageCount; ++s) totals[s] += res.timing[s];
  }
  rep.frames = iterations;
  for (std::size_t s = 0; s < kStageCount; ++s)
    rep.stage_mean_us[s] = totals[s] / static_cast<double>(iterations);
  return rep;
}

void print_bench(std::ostream& out, const BenchReport& r) {
  out << std::left << std::setw(12) << "stage" << std::right << std::setw(14) << "mean_us"
      << '\n';
  out << std::fixed << std::setprecision(1);
  for (std::size_t s = 0; s < kStageCount; ++s)
    out << std::left << std::setw(12) << stage_name(static_cast<Stage>(s)) << std::right
        << std::setw(14) << r.stage_mean_us[s] << '\n';
  out << std::left << std::setw(12) << "frames" << std::right << std::setw(14) << r.frames
      << '\n'
      << std::left << std::setw(12) << "wall_ms" << std::right << std::setw(14)
      << r.wall_us / 1000.0 << '\n'
      << std::left << std::setw(12) << "fps" << std::right << std::setw(14) << std::setprecision(2)
      << r.fps() << '\n';
  out.unsetf(std::ios::floatfield);
}

void write_bench_csv(std::ostream& out, const BenchReport& r) {
  out << "stage,mean_us\n";
  for (std::size_t s = 0; s < kStageCount; ++s)
    out << stage_name(static_cast<Stage>(s)) << ',' << r.stage_mean_us[s] << '\n';
  out << "frames," << r.frames << "\nwall_us," << r.wall_us << "\nfps," << r.fps() << '\n';
}

}  // namespace masp
