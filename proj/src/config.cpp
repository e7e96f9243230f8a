#include "masp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace masp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string& key, const std::string& v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw Error("config: bad value for '" + key + "': '" + v + "'");
  return out;
}

bool boolean(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw Error("config: bad boolean for '" + key + "': '" + v + "'");
}

std::string real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void PipelineConfig::validate() const {
  if (kernel_divisor < 1) throw Error("config: kernel_divisor must be >= 1");
  if (fuse_threshold < 0 || fuse_threshold > 255)
    throw Error("config: fuse_threshold must lie in [0, 255]");
  if (!filters.valid()) throw Error("config: invalid detection filters");
  chaos.validate();
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config: line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    for (const char* prefix : {"filters.", "chaos."})
      if (key.rfind(prefix, 0) == 0) key.erase(0, std::string(prefix).size());

    if (key == "kernel_divisor") cfg.kernel_divisor = number<int>(key, val);
    else if (key == "literal_kernel_mode") cfg.literal_kernel_mode = boolean(key, val);
    else if (key == "fuse_threshold") cfg.fuse_threshold = number<int>(key, val);
    else if (key == "bridge_dilation") cfg.bridge_dilation = boolean(key, val);
    else if (key == "min_area_fraction") cfg.filters.min_area_fraction = number<double>(key, val);
    else if (key == "max_area_fraction") cfg.filters.max_area_fraction = number<double>(key, val);
    else if (key == "aspect_min") cfg.filters.aspect_min = number<double>(key, val);
    else if (key == "aspect_max") cfg.filters.aspect_max = number<double>(key, val);
    else if (key == "x0") cfg.chaos.x0 = number<double>(key, val);
    else if (key == "y0") cfg.chaos.y0 = number<double>(key, val);
    else if (key == "alpha") cfg.chaos.alpha = number<double>(key, val);
    else if (key == "dt") cfg.chaos.dt = number<double>(key, val);
    else if (key == "block_len") cfg.chaos.block_len = number<Index>(key, val);
    else throw Error("config: unknown key '" + key + "'");
  }
  cfg.chaos.beta = std::sqrt(1.0 - cfg.chaos.alpha * cfg.chaos.alpha);
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "kernel_divisor = " << cfg.kernel_divisor << '\n'
      << "literal_kernel_mode = " << (cfg.literal_kernel_mode ? "true" : "false") << '\n'
      << "fuse_threshold = " << cfg.fuse_threshold << '\n'
      << "bridge_dilation = " << (cfg.bridge_dilation ? "true" : "false") << '\n'
      << "min_area_fraction = " << real(cfg.filters.min_area_fraction) << '\n'
      << "max_area_fraction = " << real(cfg.filters.max_area_fraction) << '\n'
      << "aspect_min = " << real(cfg.filters.aspect_min) << '\n'
      << "aspect_max = " << real(cfg.filters.aspect_max) << '\n'
      << "x0 = " << real(cfg.chaos.x0) << '\n'
      << "y0 = " << real(cfg.chaos.y0) << '\n'
      << "alpha = " << real(cfg.chaos.alpha) << '\n'
      << "dt = " << real(cfg.chaos.dt) << '\n'
      << "block_len = " << cfg.chaos.block_len << '\n';
  return out.str();
}

}  // namespace masp
