#include "masp/cli.hpp"

#include "masp/evaluation.hpp"
#include "masp/pipeline.hpp"
#include "masp/ppm.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace masp::cli {

namespace {

PipelineConfig config_for(const GlobalOptions& g) {
  return g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
}

std::string image_id(const std::string& path) {
  std::string id = std::filesystem::path(path).stem().string();
  for (char& c : id)
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  return id.empty() ? "frame" : id;
}

// Runs `body`, translating the error hierarchy into exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const RecordError& e) {
    err << "error: " << e.what() << '\n';
    return kRecordMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

void write_csv(const std::string& path, const auto& writer) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  writer(f);
}

}  // namespace

int cmd_detect(const std::string& input, const GlobalOptions& g, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = config_for(g);
    const RgbImage img = read_ppm(input);
    for (const auto& r : detect_windows(img, cfg))
      out << r.x << ' ' << r.y << ' ' << r.w << ' ' << r.h << '\n';
    return kOk;
  });
}

int cmd_scramble(const std::string& input, const std::string& output, const std::string& record,
                 const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    PipelineConfig cfg = config_for(g);
    if (g.seed) {
      const RegionSeed s = derive_region_seed(cfg.chaos, static_cast<Index>(*g.seed % (1ull << 52)));
      cfg.chaos = cfg.chaos.with_seed(s.x0, s.y0);
    }
    const RgbImage img = read_ppm(input);
    const FrameResult res = process_frame(img, cfg, image_id(input));
    write_ppm(output, res.output);
    write_record_file(record, res.record);
    out << "scrambled " << res.regions.size() << " region(s)\n";
    return kOk;
  });
}

int cmd_descramble(const std::string& input, const std::string& record,
                   const std::string& output, const GlobalOptions&, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    const RgbImage img = read_ppm(input);
    const ScrambleRecord rec = read_record_file(record);
    write_ppm(output, descramble_frame(img, rec));
    out << "restored " << rec.regions.size() << " region(s)\n";
    return kOk;
  });
}

int cmd_synth(const SynthArgs& args, const GlobalOptions& g, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    synth::CorpusOptions opt;
    opt.count = args.count;
    opt.seed = g.seed.value_or(1);
    opt.width = args.width;
    opt.height = args.height;
    opt.skew_deg = args.skew_deg;

    const auto colon = args.ratio.find(':');
    if (colon == std::string::npos) throw Error("synth: ratio must look like P:N");
    opt.positive_parts = std::stoi(args.ratio.substr(0, colon));
    opt.negative_parts = std::stoi(args.ratio.substr(colon + 1));

    if (args.negatives == "blank") opt.negatives = synth::NegativeKind::Blank;
    else if (args.negatives == "distractor") opt.negatives = synth::NegativeKind::Distractor;
    else if (args.negatives == "mixed") opt.negatives = synth::NegativeKind::Mixed;
    else throw Error("synth: negatives must be blank, distractor or mixed");

    synth::write_corpus(args.out_dir, opt);
    const Index pos = synth::positive_count(opt);
    out << "wrote " << opt.count << " image(s): " << pos << " positive, " << opt.count - pos
        << " negative\n";
    return kOk;
  });
}

int cmd_eval(const std::string& corpus, const GlobalOptions& g, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const EvalReport rep = evaluate_corpus(corpus, config_for(g), g.jobs);
    print_eval(out, rep);
    write_csv(g.csv_path, [&](std::ostream& f) { write_eval_csv(f, rep); });
    return kOk;
  });
}

int cmd_bench(const std::string& input, Index iterations, const GlobalOptions& g,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = config_for(g);
    const RgbImage img = read_ppm(input);
    const BenchReport rep = run_bench(img, cfg, iterations);
    print_bench(out, rep);
    write_csv(g.csv_path, [&](std::ostream& f) { write_bench_csv(f, rep); });
    return kOk;
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Window detection and reversible chaotic scrambling"};
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "key = value pipeline configuration");
  auto* seed_opt = app.add_option("--seed", seed, "seed for synth and scramble");
  app.add_option("--jobs", g.jobs, "worker threads for eval")->check(CLI::Range(1, 1024));
  app.add_option("--csv", g.csv_path, "also write the report as CSV");

  std::string input, output, record;
  auto* detect = app.add_subcommand("detect", "print `x y w h` per detected window");
  detect->add_option("input", input, "P6 PPM image")->required();

  auto* scramble = app.add_subcommand("scramble", "scramble detected windows");
  scramble->add_option("input", input, "P6 PPM image")->required();
  scramble->add_option("output", output, "scrambled P6 PPM")->required();
  scramble->add_option("record", record, "scramble record sidecar")->required();

  auto* descramble = app.add_subcommand("descramble", "undo a scramble using its record");
  descramble->add_option("input", input, "scrambled P6 PPM")->required();
  descramble->add_option("record", record, "scramble record sidecar")->required();
  descramble->add_option("output", output, "restored P6 PPM")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic facade corpus");
  synth->add_option("out_dir", synth_args.out_dir, "output directory")->required();
  synth->add_option("--count", synth_args.count, "number of images")->check(CLI::PositiveNumber);
  synth->add_option("--width", synth_args.width)->check(CLI::Range(16, 16384));
  synth->add_option("--height", synth_args.height)->check(CLI::Range(16, 16384));
  synth->add_option("--ratio", synth_args.ratio, "positive:negative, default 2:1");
  synth->add_option("--negatives", synth_args.negatives, "blank | distractor | mixed");
  synth->add_option("--skew", synth_args.skew_deg, "window skew in degrees")
      ->check(CLI::Range(0.0, 75.0));

  std::string corpus;
  auto* eval = app.add_subcommand("eval", "recall / false-positive rate over a corpus");
  eval->add_option("corpus", corpus, "directory written by synth")->required();

  Index iterations = 100;
  auto* bench = app.add_subcommand("bench", "frames per second of the full pipeline");
  bench->add_option("input", input, "P6 PPM frame")->required();
  bench->add_option("--iterations", iterations)->check(CLI::Range(Index{10}, Index{1} << 40));

  for (auto* sub : {detect, scramble, descramble, synth, eval, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoError;
  }
  if (*seed_opt) g.seed = seed;

  if (*detect) return cmd_detect(input, g, out, err);
  if (*scramble) return cmd_scramble(input, output, record, g, out, err);
  if (*descramble) return cmd_descramble(input, record, output, g, out, err);
  if (*synth) return cmd_synth(synth_args, g, out, err);
  if (*eval) return cmd_eval(corpus, g, out, err);
  return cmd_bench(input, iterations, g, out, err);
}

}  // namespace masp::cli
