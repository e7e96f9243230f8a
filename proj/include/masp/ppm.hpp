#pragma once

#include "masp/image.hpp"

#include <iosfwd>
#include <string>

namespace masp {

/// Binary P6, maxval 255. Header comments are accepted on read.
/// Throws IoError for unreadable or malformed input.
RgbImage read_ppm(std::istream& in);
RgbImage read_ppm(const std::string& path);

/// Writes "P6\n<w> <h>\n255\n" followed by the raw triples.
void write_ppm(std::ostream& out, const RgbImage& img);
void write_ppm(const std::string& path, const RgbImage& img);

}  // namespace masp
