#include "masp/cli.hpp"
#include "masp/evaluation.hpp"
#include "masp/pipeline.hpp"
#include "masp/ppm.hpp"
#include "masp/synth.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace masp {
namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("masp_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

synth::SyntheticImage one_window() {
  synth::SyntheticSpec spec;
  synth::WindowSpec ws;
  ws.cx = 300;
  ws.cy = 250;
  ws.w = 180;
  ws.h = 220;
  ws.pane_rows = 2;
  ws.pane_cols = 3;
  spec.windows = {ws};
  spec.noise_seed = 12;
  return synth::render(spec);
}

RgbImage blank_wall() {
  synth::Rng rng(21);
  return synth::render(synth::random_blank(rng, 320, 240)).image;
}

std::vector<WindowRegion> parse_boxes(const std::string& text) {
  std::vector<WindowRegion> out;
  std::istringstream in(text);
  WindowRegion r;
  while (in >> r.x >> r.y >> r.w >> r.h) out.push_back(r);
  return out;
}

TEST(Ppm, RoundTripIsByteStable) {
  std::mt19937_64 rng(1);
  const RgbImage img = oracle::random_rgb(rng, 17, 9);
  std::stringstream a;
  write_ppm(a, img);
  const std::string first = a.str();
  EXPECT_EQ(first.rfind("P6\n17 9\n255\n", 0), 0u);
  const RgbImage back = read_ppm(a);
  EXPECT_EQ(back, img);
  std::stringstream b;
  write_ppm(b, back);
  EXPECT_EQ(b.str(), first);
}

TEST(Ppm, HeaderCommentsAccepted) {
  std::string data = "P6\n# made by hand\n2 1 # trailing\n255\n";
  data += std::string("\x01\x02\x03\x04\x05\x06", 6);
  std::istringstream in(data);
  const RgbImage img = read_ppm(in);
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.pixel(1, 0)(2), 6);
}

TEST(Ppm, MalformedRejected) {
  for (std::string data : {std::string("P3\n1 1\n255\n1 2 3\n"), std::string("P6\n2 2\n255\nabc"),
                           std::string("P6\n1 1\n65535\n\0\0\0\0\0\0", 20),
                           std::string("P6\n0 4\n255\n"), std::string("")}) {
    std::istringstream in(data);
    EXPECT_THROW(read_ppm(in), IoError);
  }
  EXPECT_THROW(read_ppm(std::string("/nonexistent/x.ppm")), IoError);
}

TEST(CmdDetect, BlankWallPrintsNothing) {
  TempDir tmp;
  write_ppm(tmp.file("blank.ppm"), blank_wall());
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_detect(tmp.file("blank.ppm"), {}, out, err), cli::kOk);
  EXPECT_EQ(out.str(), "");
}

TEST(CmdDetect, OneWindowMatchesTruthPerEdge) {
  TempDir tmp;
  const auto s = one_window();
  write_ppm(tmp.file("w.ppm"), s.image);
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_detect(tmp.file("w.ppm"), {}, out, err), cli::kOk);
  const auto boxes = parse_boxes(out.str());
  ASSERT_EQ(boxes.size(), 1u);
  const WindowRegion& t = s.truth[0];
  const WindowRegion& b = boxes[0];
  EXPECT_NEAR(b.x, t.x, 0.1 * t.w);
  EXPECT_NEAR(b.right(), t.right(), 0.1 * t.w);
  EXPECT_NEAR(b.y, t.y, 0.1 * t.h);
  EXPECT_NEAR(b.bottom(), t.bottom(), 0.1 * t.h);
}

TEST(CmdDetect, IoErrorsExitTwo) {
  TempDir tmp;
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_detect(tmp.file("missing.ppm"), {}, out, err), cli::kIoError);
  EXPECT_NE(err.str().find("error"), std::string::npos);
  std::ofstream(tmp.file("bad.ppm")) << "P6\n10 10\n255\nshort";
  EXPECT_EQ(cli::cmd_detect(tmp.file("bad.ppm"), {}, out, err), cli::kIoError);
  cli::GlobalOptions g;
  g.config_path = tmp.file("missing.conf");
  write_ppm(tmp.file("blank.ppm"), blank_wall());
  EXPECT_EQ(cli::cmd_detect(tmp.file("blank.ppm"), g, out, err), cli::kIoError);
}

TEST(CmdScramble, RoundTripIsByteIdentical) {
  TempDir tmp;
  write_ppm(tmp.file("in.ppm"), synth::render(synth::three_window_facade(640, 480)).image);
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("s.ppm"), tmp.file("s.rec"), {}, out,
                              err),
            cli::kOk);
  EXPECT_NE(slurp(tmp.file("s.ppm")), slurp(tmp.file("in.ppm")));
  EXPECT_EQ(read_record_file(tmp.file("s.rec")).regions.size(), 3u);
  ASSERT_EQ(cli::cmd_descramble(tmp.file("s.ppm"), tmp.file("s.rec"), tmp.file("back.ppm"), {},
                                out, err),
            cli::kOk);
  EXPECT_EQ(slurp(tmp.file("back.ppm")), slurp(tmp.file("in.ppm")));
}

TEST(CmdScramble, SeedChangesOutputButStillRestores) {
  TempDir tmp;
  write_ppm(tmp.file("in.ppm"), one_window().image);
  std::ostringstream out, err;
  cli::GlobalOptions g;
  ASSERT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("a.ppm"), tmp.file("a.rec"), g, out,
                              err),
            cli::kOk);
  g.seed = 42;
  ASSERT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("b.ppm"), tmp.file("b.rec"), g, out,
                              err),
            cli::kOk);
  ASSERT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("c.ppm"), tmp.file("c.rec"), g, out,
                              err),
            cli::kOk);
  EXPECT_NE(slurp(tmp.file("a.ppm")), slurp(tmp.file("b.ppm")));
  EXPECT_EQ(slurp(tmp.file("b.ppm")), slurp(tmp.file("c.ppm")));
  EXPECT_EQ(slurp(tmp.file("b.rec")), slurp(tmp.file("c.rec")));
  ASSERT_EQ(cli::cmd_descramble(tmp.file("b.ppm"), tmp.file("b.rec"), tmp.file("back.ppm"), g,
                                out, err),
            cli::kOk);
  EXPECT_EQ(slurp(tmp.file("back.ppm")), slurp(tmp.file("in.ppm")));
}

TEST(CmdScramble, NoWindowInputUnchanged) {
  TempDir tmp;
  write_ppm(tmp.file("in.ppm"), blank_wall());
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("s.ppm"), tmp.file("s.rec"), {}, out,
                              err),
            cli::kOk);
  EXPECT_EQ(slurp(tmp.file("s.ppm")), slurp(tmp.file("in.ppm")));
  EXPECT_TRUE(read_record_file(tmp.file("s.rec")).regions.empty());
}

TEST(CmdScramble, UnwritableOutputExitsTwo) {
  TempDir tmp;
  write_ppm(tmp.file("in.ppm"), one_window().image);
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("no/such/dir/s.ppm"),
                              tmp.file("s.rec"), {}, out, err),
            cli::kIoError);
  EXPECT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("s.ppm"),
                              tmp.file("no/such/dir/s.rec"), {}, out, err),
            cli::kIoError);
}

TEST(CmdDescramble, BadRecordsExitThree) {
  TempDir tmp;
  write_ppm(tmp.file("in.ppm"), one_window().image);
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_scramble(tmp.file("in.ppm"), tmp.file("s.ppm"), tmp.file("s.rec"), {}, out,
                              err),
            cli::kOk);
  const std::string rec = slurp(tmp.file("s.rec"));

  std::ofstream(tmp.file("trunc.rec")) << rec.substr(0, rec.size() - 5);
  EXPECT_EQ(cli::cmd_descramble(tmp.file("s.ppm"), tmp.file("trunc.rec"), tmp.file("o.ppm"), {},
                                out, err),
            cli::kRecordMismatch);

  // The same record applied to a differently sized image.
  write_ppm(tmp.file("small.ppm"), blank_wall());
  EXPECT_EQ(cli::cmd_descramble(tmp.file("small.ppm"), tmp.file("s.rec"), tmp.file("o.ppm"), {},
                                out, err),
            cli::kRecordMismatch);

  EXPECT_EQ(cli::cmd_descramble(tmp.file("s.ppm"), tmp.file("missing.rec"), tmp.file("o.ppm"),
                                {}, out, err),
            cli::kIoError);
}

TEST(CmdSynth, RatioAndDeterminism) {
  TempDir tmp;
  cli::SynthArgs args;
  args.count = 3;
  args.width = 160;
  args.height = 120;
  args.out_dir = tmp.file("a");
  cli::GlobalOptions g;
  g.seed = 7;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_synth(args, g, out, err), cli::kOk);
  EXPECT_NE(out.str().find("2 positive, 1 negative"), std::string::npos);
  EXPECT_FALSE(read_boxes(tmp.file("a/img_00000.txt")).empty());
  EXPECT_FALSE(read_boxes(tmp.file("a/img_00001.txt")).empty());
  EXPECT_TRUE(read_boxes(tmp.file("a/img_00002.txt")).empty());

  args.out_dir = tmp.file("b");
  ASSERT_EQ(cli::cmd_synth(args, g, out, err), cli::kOk);
  for (const auto* f : {"img_00000.ppm", "img_00000.txt", "img_00001.ppm", "img_00002.ppm"})
    EXPECT_EQ(slurp(tmp.file(std::string("a/") + f)), slurp(tmp.file(std::string("b/") + f)));
}

TEST(CmdSynth, BadArgumentsRejected) {
  TempDir tmp;
  cli::SynthArgs args;
  args.count = 3;
  args.out_dir = tmp.file("c");
  std::ostringstream out, err;
  args.negatives = "cats";
  EXPECT_EQ(cli::cmd_synth(args, {}, out, err), cli::kIoError);
  args.negatives = "blank";
  args.ratio = "21";
  EXPECT_EQ(cli::cmd_synth(args, {}, out, err), cli::kIoError);
}

TEST(CmdEval, BlankNegativesOnly) {
  TempDir tmp;
  synth::CorpusOptions opt;
  opt.count = 6;
  opt.width = 320;
  opt.height = 240;
  opt.positive_parts = 0;
  synth::write_corpus(tmp.file("neg"), opt);
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(tmp.file("neg"), {}, out, err), cli::kOk);
  EXPECT_NE(out.str().find("n/a"), std::string::npos);
  const EvalReport rep = evaluate_corpus(tmp.file("neg"), PipelineConfig{});
  EXPECT_FALSE(rep.recall().has_value());
  ASSERT_TRUE(rep.fpr().has_value());
  EXPECT_EQ(*rep.fpr(), 0.0);
}

TEST(CmdEval, EmptyCorpusExitsTwo) {
  TempDir tmp;
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_eval(tmp.path().string(), {}, out, err), cli::kIoError);
  EXPECT_EQ(cli::cmd_eval(tmp.file("nothing"), {}, out, err), cli::kIoError);
}

TEST(CmdEval, CsvRowsReproduceSummary) {
  TempDir tmp;
  synth::CorpusOptions opt;
  opt.count = 12;
  opt.width = 320;
  opt.height = 240;
  opt.seed = 5;
  opt.negatives = synth::NegativeKind::Mixed;
  synth::write_corpus(tmp.file("c"), opt);

  cli::GlobalOptions g;
  g.csv_path = tmp.file("eval.csv");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(tmp.file("c"), g, out, err), cli::kOk);
  const EvalReport rep = evaluate_corpus(tmp.file("c"), PipelineConfig{});

  // Recompute from the CSV detail rows alone.
  std::istringstream csv(slurp(g.csv_path));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "image,truth,detections,matched,false_regions");
  long truth = 0, matched = 0, negatives = 0, flagged = 0, rows = 0;
  while (std::getline(csv, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream f(line);
    std::string name;
    long t, d, m, fr;
    ASSERT_TRUE(static_cast<bool>(f >> name >> t >> d >> m >> fr));
    ++rows;
    truth += t;
    matched += m;
    if (t == 0) {
      ++negatives;
      flagged += d > 0;
    }
  }
  EXPECT_EQ(rows, 12);
  ASSERT_TRUE(rep.recall() && rep.fpr());
  EXPECT_EQ(static_cast<double>(matched) / static_cast<double>(truth), *rep.recall());
  EXPECT_EQ(static_cast<double>(flagged) / static_cast<double>(negatives), *rep.fpr());
}

TEST(CmdEval, IndependentOfJobCount) {
  TempDir tmp;
  synth::CorpusOptions opt;
  opt.count = 9;
  opt.width = 320;
  opt.height = 240;
  opt.negatives = synth::NegativeKind::Distractor;
  synth::write_corpus(tmp.file("c"), opt);
  std::ostringstream one, four, err;
  cli::GlobalOptions g;
  ASSERT_EQ(cli::cmd_eval(tmp.file("c"), g, one, err), cli::kOk);
  g.jobs = 4;
  ASSERT_EQ(cli::cmd_eval(tmp.file("c"), g, four, err), cli::kOk);
  EXPECT_EQ(one.str(), four.str());
}

TEST(EvaluateImage, MatchingRule) {
  const std::vector<WindowRegion> truth{{0, 0, 10, 10}, {50, 50, 10, 10}};
  const auto e = evaluate_image("x", truth, {{1, 1, 10, 10}, {100, 100, 5, 5}});
  EXPECT_EQ(e.truth_count, 2);
  EXPECT_EQ(e.detections, 2);
  EXPECT_EQ(e.matched_truth, 1);
  EXPECT_EQ(e.false_regions, 1);
  // IoU of exactly 0.5 counts.
  EXPECT_EQ(evaluate_image("y", {{0, 0, 10, 10}}, {{0, 0, 10, 5}}).matched_truth, 1);
  EXPECT_EQ(evaluate_image("z", {{0, 0, 10, 10}}, {{0, 0, 10, 4}}).matched_truth, 0);
}

TEST(CmdBench, Structure) {
  TempDir tmp;
  std::mt19937_64 rng(3);
  write_ppm(tmp.file("f.ppm"), oracle::natural_image(rng, 64, 64));
  cli::GlobalOptions g;
  g.csv_path = tmp.file("bench.csv");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_bench(tmp.file("f.ppm"), 10, g, out, err), cli::kOk);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);  // header
  for (const char* stage : {"preprocess", "morphology", "segment", "contour", "filter",
                            "scramble"}) {
    ASSERT_TRUE(static_cast<bool>(std::getline(lines, line)));
    EXPECT_EQ(line.rfind(stage, 0), 0u) << line;
  }
  EXPECT_NE(out.str().find("fps"), std::string::npos);
  EXPECT_FALSE(slurp(g.csv_path).empty());

  const BenchReport rep = run_bench(read_ppm(tmp.file("f.ppm")), PipelineConfig{}, 10);
  EXPECT_EQ(rep.frames, 10);
  EXPECT_GT(rep.fps(), 0.0);
  EXPECT_LE(rep.stage_sum_us(), rep.wall_us * 1.1);
}

TEST(CmdBench, TooFewIterationsRejected) {
  TempDir tmp;
  write_ppm(tmp.file("f.ppm"), blank_wall());
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_bench(tmp.file("f.ppm"), 9, {}, out, err), cli::kIoError);
  EXPECT_THROW(run_bench(blank_wall(), PipelineConfig{}, 9), Error);
  EXPECT_EQ(cli::cmd_bench(tmp.file("none.ppm"), 10, {}, out, err), cli::kIoError);
}

TEST(CmdBench, DoublingIterationsIsStable) {
  const auto frame = synth::render(synth::three_window_facade(320, 240)).image;
  const PipelineConfig cfg;
  run_bench(frame, cfg, 10);  // warm up
  const double a = run_bench(frame, cfg, 40).fps();
  const double b = run_bench(frame, cfg, 80).fps();
  EXPECT_LT(std::abs(b - a) / a, 0.2) << a << " vs " << b;
}

std::vector<char*> argv_of(std::vector<std::string>& args) {
  std::vector<char*> v;
  for (auto& a : args) v.push_back(a.data());
  return v;
}

TEST(Run, CommandLineSmoke) {
  TempDir tmp;
  std::ostringstream out, err;
  std::vector<std::string> synth_args{"masp", "--seed", "3", "synth", tmp.file("c"), "--count",
                                      "3", "--width", "160", "--height", "120"};
  auto argv = argv_of(synth_args);
  ASSERT_EQ(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(tmp.file("c/img_00002.ppm")));

  std::vector<std::string> detect_args{"masp", "detect", tmp.file("c/img_00000.ppm")};
  argv = argv_of(detect_args);
  EXPECT_EQ(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), 0);

  std::vector<std::string> eval_args{"masp", "eval", tmp.file("c"), "--jobs", "2"};
  argv = argv_of(eval_args);
  EXPECT_EQ(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), 0);

  std::vector<std::string> bad{"masp", "bench", tmp.file("c/img_00000.ppm"), "--iterations",
                               "5"};
  argv = argv_of(bad);
  EXPECT_EQ(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), cli::kIoError);

  std::vector<std::string> none{"masp"};
  argv = argv_of(none);
  EXPECT_NE(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), 0);
}

}  // namespace
}  // namespace masp
