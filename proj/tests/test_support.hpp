#pragma once

#include <string>
#include <vector>

#include "litho/grid.hpp"
#include "litho/rng.hpp"

namespace litho::testing {

// Builds a layout from ascii art: '#' or '1' = foreground, '.' or '0' =
// background; whitespace is ignored, rows come from lines containing at
// least one grid character.
inline BinaryLayout parse_grid(const std::string& art) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> row;
  auto flush = [&] {
    if (!row.empty()) rows.push_back(row);
    row.clear();
  };
  for (const char c : art) {
    switch (c) {
      case '#':
      case '1': row.push_back(1); break;
      case '.':
      case '0': row.push_back(0); break;
      case '\n': flush(); break;
      default: break;  // ignore spacing
    }
  }
  flush();
  if (rows.empty()) return BinaryLayout(0, 0);
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows[0].size());
  BinaryLayout out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out.set(x, y, rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]);
  return out;
}

inline std::string grid_to_string(const BinaryLayout& a) {
  std::string out;
  out.reserve(static_cast<std::size_t>((a.width + 1)) * a.height);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) out.push_back(a.at(x, y) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

inline BinaryLayout random_layout(Rng& rng, int width, int height, double density = 0.5) {
  BinaryLayout out(width, height);
  for (std::uint8_t& px : out.pixels) px = rng.uniform01() < density ? 1 : 0;
  return out;
}

}  // namespace litho::testing
