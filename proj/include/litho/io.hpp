#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "litho/grid.hpp"

namespace litho {

struct GrayImage8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bytes;  // row-major
};

// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const GrayImage8& img);
GrayImage8 read_pgm(const std::filesystem::path& path);

// Binary mask as PGM with foreground = 255, and back (>=128 -> foreground).
void write_mask_pgm(const std::filesystem::path& path, const BinaryLayout& mask);
BinaryLayout read_mask_pgm(const std::filesystem::path& path);

// Binary mask as bit-packed PBM (P4), and back.
void write_mask_pbm(const std::filesystem::path& path, const BinaryLayout& mask);
BinaryLayout read_mask_pbm(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace litho
