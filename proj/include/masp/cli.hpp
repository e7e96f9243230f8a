#pragma once

#include "masp/synth.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace masp::cli {

enum ExitCode : int { kOk = 0, kIoError = 2, kRecordMismatch = 3 };

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string csv_path;
};

struct SynthArgs {
  std::string out_dir;
  Index count = 30;
  Index width = 640;
  Index height = 480;
  std::string ratio = "2:1";
  std::string negatives = "blank";
  double skew_deg = 0.0;
};

// Each subcommand reports to `out`, diagnostics to `err`, and returns an
// exit code.
int cmd_detect(const std::string& input, const GlobalOptions& g, std::ostream& out,
               std::ostream& err);
int cmd_scramble(const std::string& input, const std::string& output, const std::string& record,
                 const GlobalOptions& g, std::ostream& out, std::ostream& err);
int cmd_descramble(const std::string& input, const std::string& record,
                   const std::string& output, const GlobalOptions& g, std::ostream& out,
                   std::ostream& err);
int cmd_synth(const SynthArgs& args, const GlobalOptions& g, std::ostream& out,
              std::ostream& err);
int cmd_eval(const std::string& corpus, const GlobalOptions& g, std::ostream& out,
             std::ostream& err);
int cmd_bench(const std::string& input, Index iterations, const GlobalOptions& g,
              std::ostream& out, std::ostream& err);

/// Full command line: `masp <subcommand> ...`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace masp::cli
