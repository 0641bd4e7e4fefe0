#include "litho/io.hpp"

#include <fstream>
#include <sstream>

#include "litho/errors.hpp"

namespace litho {

namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  throw Error("io", "io-error", path.string() + ": " + what);
}

// Skips whitespace and '#' comment lines between PNM header tokens.
int read_pnm_int(std::istream& in, const std::filesystem::path& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF) io_fail(path, "truncated header");
  int value = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) io_fail(path, "malformed header token");
  return value;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const GrayImage8& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.bytes.data()),
            static_cast<std::streamsize>(img.bytes.size()));
  if (!out) io_fail(path, "write failed");
}

GrayImage8 read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') io_fail(path, "not a P5 PGM");
  GrayImage8 img;
  img.width = read_pnm_int(in, path);
  img.height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (maxval != 255) io_fail(path, "unsupported maxval");
  if (img.width <= 0 || img.height <= 0) io_fail(path, "bad dimensions");
  img.bytes.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.bytes.data()),
          static_cast<std::streamsize>(img.bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.bytes.size()))
    io_fail(path, "truncated pixel data");
  return img;
}

void write_mask_pgm(const std::filesystem::path& path, const BinaryLayout& mask) {
  GrayImage8 img{mask.width, mask.height, {}};
  img.bytes.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) img.bytes[i] = mask.pixels[i] ? 255 : 0;
  write_pgm(path, img);
}

BinaryLayout read_mask_pgm(const std::filesystem::path& path) {
  const GrayImage8 img = read_pgm(path);
  BinaryLayout mask(img.width, img.height);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.pixels[i] = img.bytes[i] >= 128 ? 1 : 0;
  return mask;
}

void write_mask_pbm(const std::filesystem::path& path, const BinaryLayout& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << "P4\n" << mask.width << " " << mask.height << "\n";
  const int row_bytes = (mask.width + 7) / 8;
  std::vector<std::uint8_t> row(row_bytes);
  for (int y = 0; y < mask.height; ++y) {
    std::fill(row.begin(), row.end(), 0);
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y)) row[x >> 3] |= static_cast<std::uint8_t>(0x80 >> (x & 7));
    out.write(reinterpret_cast<const char*>(row.data()), row_bytes);
  }
  if (!out) io_fail(path, "write failed");
}

BinaryLayout read_mask_pbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '4') io_fail(path, "not a P4 PBM");
  const int width = read_pnm_int(in, path);
  const int height = read_pnm_int(in, path);
  if (width <= 0 || height <= 0) io_fail(path, "bad dimensions");
  BinaryLayout mask(width, height);
  const int row_bytes = (width + 7) / 8;
  std::vector<char> row(row_bytes);
  for (int y = 0; y < height; ++y) {
    in.read(row.data(), row_bytes);
    if (in.gcount() != row_bytes) io_fail(path, "truncated pixel data");
    for (int x = 0; x < width; ++x)
      mask.set(x, y, (static_cast<std::uint8_t>(row[x >> 3]) >> (7 - (x & 7))) & 1);
  }
  return mask;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << content;
  if (!out) io_fail(path, "write failed");
}

}  // namespace litho
