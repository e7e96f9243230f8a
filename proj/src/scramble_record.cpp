#include "masp/chaos.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace masp {

namespace {

constexpr const char* kHeader = "masp-scramble v1";

std::string real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw RecordError(std::string("scramble record: bad ") + what + " '" + s + "'");
  return v;
}

}  // namespace

std::string format_record(const ScrambleRecord& rec) {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "image " << rec.image_id << ' ' << rec.width << ' ' << rec.height << '\n';
  out << "params " << real(rec.master.x0) << ' ' << real(rec.master.y0) << ' '
      << real(rec.master.alpha) << ' ' << real(rec.master.dt) << ' ' << rec.master.block_len
      << '\n';
  for (const auto& r : rec.regions) {
    out << "region " << r.index << ' ' << r.region.x << ' ' << r.region.y << ' ' << r.region.w
        << ' ' << r.region.h << ' ' << real(r.seed.x0) << ' ' << real(r.seed.y0) << '\n';
  }
  return out.str();
}

ScrambleRecord parse_record(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> lines;
  while (std::getline(in, line)) {
    auto t = tokens(line);
    if (!t.empty()) lines.push_back(std::move(t));
  }
  // A truncated file loses its trailing newline and usually part of a line.
  if (!text.empty() && text.back() != '\n') throw RecordError("scramble record: truncated");

  if (lines.size() < 3 || lines[0].size() != 2 || lines[0][0] + " " + lines[0][1] != kHeader)
    throw RecordError("scramble record: missing 'masp-scramble v1' header");

  ScrambleRecord rec;
  const auto& img = lines[1];
  if (img.size() != 4 || img[0] != "image") throw RecordError("scramble record: bad image line");
  rec.image_id = img[1];
  rec.width = parse_number<Index>(img[2], "width");
  rec.height = parse_number<Index>(img[3], "height");
  if (rec.width < 1 || rec.height < 1) throw RecordError("scramble record: bad dimensions");

  const auto& par = lines[2];
  if (par.size() != 6 || par[0] != "params") throw RecordError("scramble record: bad params line");
  try {
    rec.master = ChaosParams::make(parse_number<double>(par[1], "x0"),
                                   parse_number<double>(par[2], "y0"),
                                   parse_number<double>(par[3], "alpha"),
                                   parse_number<double>(par[4], "dt"),
                                   parse_number<Index>(par[5], "block_len"));
  } catch (const RecordError&) {
    throw;
  } catch (const Error& e) {
    throw RecordError(std::string("scramble record: ") + e.what());
  }

  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto& t = lines[i];
    if (t.size() != 8 || t[0] != "region") throw RecordError("scramble record: bad region line");
    RecordedRegion r;
    r.index = parse_number<Index>(t[1], "region index");
    r.region.x = parse_number<Index>(t[2], "x");
    r.region.y = parse_number<Index>(t[3], "y");
    r.region.w = parse_number<Index>(t[4], "w");
    r.region.h = parse_number<Index>(t[5], "h");
    r.seed.x0 = parse_number<double>(t[6], "x0'");
    r.seed.y0 = parse_number<double>(t[7], "y0'");
    if (r.index < 0) throw RecordError("scramble record: negative region index");
    rec.regions.push_back(r);
  }
  return rec;
}

void write_record_file(const std::string& path, const ScrambleRecord& rec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << format_record(rec);
  if (!out) throw IoError("failed writing '" + path + "'");
}

ScrambleRecord read_record_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_record(buf.str());
}

}  // namespace masp
