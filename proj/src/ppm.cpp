#include "masp/ppm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

namespace masp {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

Index header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  if (tok.empty() || tok.size() > 9 ||
      tok.find_first_not_of("0123456789") != std::string::npos)
    throw IoError(std::string("ppm: bad ") + what + " '" + tok + "'");
  return std::stol(tok);
}

}  // namespace

RgbImage read_ppm(std::istream& in) {
  if (header_token(in) != "P6") throw IoError("ppm: not a binary P6 file");
  const Index w = header_int(in, "width");
  const Index h = header_int(in, "height");
  const Index maxval = header_int(in, "maxval");
  if (w < 1 || h < 1) throw IoError("ppm: empty image");
  if (maxval != 255) throw IoError("ppm: only maxval 255 is supported");
  // header_token consumed exactly one whitespace byte after maxval.
  RgbImage img(w, h);
  in.read(reinterpret_cast<char*>(img.bytes()), img.byte_count());
  if (in.gcount() != img.byte_count()) throw IoError("ppm: truncated pixel data");
  return img;
}

RgbImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const RgbImage& img) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.bytes()), img.byte_count());
  if (!out) throw IoError("ppm: write failed");
}

void write_ppm(const std::string& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_ppm(out, img);
}

}  // namespace masp
