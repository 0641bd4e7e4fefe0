#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "litho/errors.hpp"

namespace litho {

// Axis-aligned pixel rectangle with inclusive bounds. Default state is empty.
struct Rect {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }

  Rect expanded(int margin) const {
    return Rect{x0 - margin, y0 - margin, x1 + margin, y1 + margin};
  }
  Rect clipped(int grid_width, int grid_height) const {
    return Rect{std::max(x0, 0), std::max(y0, 0),
                std::min(x1, grid_width - 1), std::min(y1, grid_height - 1)};
  }
  bool operator==(const Rect&) const = default;
};

// 2-D binary grid, row-major, one byte per pixel: 0 background, 1 foreground.
struct BinaryLayout {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  BinaryLayout() = default;
  BinaryLayout(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h) {
    if (w < 0 || h < 0) throw Error("grid", "invalid-size", "negative dimensions");
    pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
  }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, std::uint8_t v) {
    pixels[static_cast<std::size_t>(y) * width + x] = v;
  }
  std::size_t size() const { return pixels.size(); }

  bool operator==(const BinaryLayout&) const = default;
};

inline void require_same_dims(const BinaryLayout& a, const BinaryLayout& b,
                              const char* module) {
  if (a.width != b.width || a.height != b.height)
    throw Error(module, "dimension-mismatch", "layout dimensions differ");
}

inline BinaryLayout complement(const BinaryLayout& a) {
  BinaryLayout out(a.width, a.height);
  for (std::size_t i = 0; i < a.pixels.size(); ++i) out.pixels[i] = a.pixels[i] ? 0 : 1;
  return out;
}

inline bool is_subset(const BinaryLayout& a, const BinaryLayout& b) {
  require_same_dims(a, b, "grid");
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    if (a.pixels[i] && !b.pixels[i]) return false;
  return true;
}

inline long foreground_area(const BinaryLayout& a) {
  long n = 0;
  for (std::uint8_t v : a.pixels) n += v;
  return n;
}

inline long symmetric_difference_area(const BinaryLayout& a, const BinaryLayout& b) {
  require_same_dims(a, b, "grid");
  long n = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) n += (a.pixels[i] != b.pixels[i]);
  return n;
}

}  // namespace litho
