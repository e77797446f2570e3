#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "csp/datasets.hpp"
#include "csp/errors.hpp"

namespace csp {

namespace {

// Header tokens are whitespace separated; '#' starts a comment running to end of line.
std::uint32_t read_header_number(std::istream& in) {
  int c = in.get();
  while (true) {
    if (c == '#') {
      while (c != '\n' && c != EOF) c = in.get();
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || c < '0' || c > '9') throw ParseError(0, "PPM: expected a decimal header field");
  std::uint64_t value = 0;
  while (c >= '0' && c <= '9') {
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > UINT32_MAX) throw ParseError(0, "PPM: header value too large");
    c = in.get();
  }
  if (c != EOF) in.unget();
  return static_cast<std::uint32_t>(value);
}

std::uint16_t read_sample(std::istream& in, bool binary, std::uint32_t maxval) {
  std::uint32_t v = 0;
  if (binary) {
    const int hi = in.get();
    if (hi == EOF) throw ParseError(0, "PPM: truncated pixel data");
    v = static_cast<std::uint32_t>(hi);
    if (maxval > 255) {
      const int lo = in.get();
      if (lo == EOF) throw ParseError(0, "PPM: truncated pixel data");
      v = (v << 8) | static_cast<std::uint32_t>(lo);
    }
  } else {
    v = read_header_number(in);
  }
  if (v > maxval) throw ParseError(0, "PPM: sample exceeds maxval");
  return static_cast<std::uint16_t>(v);
}

}  // namespace

Image read_ppm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' && magic[1] != '6'))
    throw ParseError(0, "PPM: unsupported magic number (expected P2, P3, P5 or P6)");
  const bool binary = magic[1] == '5' || magic[1] == '6';
  const bool gray = magic[1] == '2' || magic[1] == '5';
  Image img;
  img.width = read_header_number(in);
  img.height = read_header_number(in);
  img.maxval = read_header_number(in);
  if (img.width == 0 || img.height == 0) throw ParseError(0, "PPM: empty image");
  if (img.maxval == 0 || img.maxval > 65535) throw ParseError(0, "PPM: maxval must lie in [1, 65535]");
  if (binary) {
    const int sep = in.get();
    if (sep != ' ' && sep != '\t' && sep != '\n' && sep != '\r') throw ParseError(0, "PPM: missing whitespace before raster");
  }
  const std::size_t pixels = img.width * img.height;
  img.rgb.resize(3 * pixels);
  for (std::size_t p = 0; p < pixels; ++p) {
    if (gray) {
      const std::uint16_t g = read_sample(in, binary, img.maxval);
      img.rgb[3 * p] = img.rgb[3 * p + 1] = img.rgb[3 * p + 2] = g;
    } else {
      for (std::size_t ch = 0; ch < 3; ++ch) img.rgb[3 * p + ch] = read_sample(in, binary, img.maxval);
    }
  }
  return img;
}

Image read_ppm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_ppm(in);
}

void write_ppm(std::ostream& out, const Image& img) {
  out << "P6\n" << img.width << ' ' << img.height << '\n' << img.maxval << '\n';
  for (std::uint16_t v : img.rgb) {
    if (img.maxval > 255) out.put(static_cast<char>(v >> 8));
    out.put(static_cast<char>(v & 0xff));
  }
}

}  // namespace csp
