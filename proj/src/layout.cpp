#include "litho/layout.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "litho/errors.hpp"
#include "litho/rng.hpp"
#include "litho/topology.hpp"

namespace litho {

namespace {

int floor_mod(int v, int m) {
  const int r = v % m;
  return r < 0 ? r + m : r;
}

void validate_line_spec(const LayoutSpec& spec) {
  if (spec.kind != LayoutKind::horizontal_lines && spec.kind != LayoutKind::vertical_lines)
    throw Error("layout", "invalid-spec", "not a line-array kind");
  if (spec.line_width < 1 || spec.pitch <= spec.line_width)
    throw Error("layout", "invalid-spec",
                "need line_width >= 1 and pitch > line_width, got width " +
                    std::to_string(spec.line_width) + " pitch " + std::to_string(spec.pitch));
  if (spec.grid <= 0) throw Error("layout", "invalid-spec", "non-positive grid");
}

bool line_predicate(const LayoutSpec& spec, int coord) {
  return floor_mod(coord - spec.effective_offset(), spec.pitch) < spec.line_width;
}

std::string numbered_id(char prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%02d", prefix, index);
  return buf;
}

void fill_rect(BinaryLayout& a, int x0, int y0, int x1, int y1) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) a.set(x, y, 1);
}

// Thick 45-degree bar: a w-by-w square stamped at each of `len` diagonal
// steps. dir = +1 slopes down-right, -1 up-right.
void fill_diagonal(BinaryLayout& a, int x0, int y0, int len, int w, int dir) {
  for (int t = 0; t < len; ++t) {
    const int bx = x0 + t;
    const int by = y0 + dir * t;
    fill_rect(a, bx, by, bx + w - 1, by + w - 1);
  }
}

}  // namespace

std::string to_string(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::horizontal_lines: return "horizontal-lines";
    case LayoutKind::vertical_lines: return "vertical-lines";
    case LayoutKind::composite: return "composite";
  }
  return "composite";
}

LayoutKind layout_kind_from_string(const std::string& name) {
  if (name == "horizontal-lines") return LayoutKind::horizontal_lines;
  if (name == "vertical-lines") return LayoutKind::vertical_lines;
  if (name == "composite") return LayoutKind::composite;
  throw Error("layout", "invalid-spec", "no layout kind named '" + name + "'");
}

BinaryLayout make_line_array(const LayoutSpec& spec) {
  validate_line_spec(spec);
  BinaryLayout out(spec.grid, spec.grid);
  const bool horizontal = spec.kind == LayoutKind::horizontal_lines;
  for (int c = 0; c < spec.grid; ++c) {
    if (!line_predicate(spec, c)) continue;
    if (horizontal)
      for (int x = 0; x < spec.grid; ++x) out.set(x, c, 1);
    else
      for (int y = 0; y < spec.grid; ++y) out.set(c, y, 1);
  }
  return out;
}

int line_count(const LayoutSpec& spec) {
  validate_line_spec(spec);
  int runs = 0;
  bool prev = false;
  for (int c = 0; c < spec.grid; ++c) {
    const bool cur = line_predicate(spec, c);
    if (cur && !prev) ++runs;
    prev = cur;
  }
  return runs;
}

BinaryLayout make_composite(const LayoutSpec& spec) {
  if (spec.kind != LayoutKind::composite)
    throw Error("layout", "invalid-spec", "not a composite kind");
  if (spec.grid < 32) throw Error("layout", "invalid-spec", "grid too small for composites");
  Rng rng(spec.seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    BinaryLayout a(spec.grid, spec.grid);
    const int rects = rng.uniform_int(4, 12);
    const int diagonals = rng.uniform_int(0, 4);
    for (int i = 0; i < rects; ++i) {
      const int w = rng.uniform_int(3, 10);
      const int len = rng.uniform_int(16, std::min(64, spec.grid - 1));
      const bool horizontal = rng.uniform_int(0, 1) == 0;
      const int dx = horizontal ? len : w;
      const int dy = horizontal ? w : len;
      const int x0 = rng.uniform_int(0, spec.grid - dx);
      const int y0 = rng.uniform_int(0, spec.grid - dy);
      fill_rect(a, x0, y0, x0 + dx - 1, y0 + dy - 1);
    }
    for (int i = 0; i < diagonals; ++i) {
      const int w = rng.uniform_int(3, 10);
      const int len = rng.uniform_int(16, std::min(48, spec.grid - 16));
      const int dir = rng.uniform_int(0, 1) == 0 ? 1 : -1;
      const int extent = len + w - 1;  // bounding-box side of the stamped bar
      const int x0 = rng.uniform_int(0, spec.grid - extent);
      const int y0 = dir > 0 ? rng.uniform_int(0, spec.grid - extent)
                             : rng.uniform_int(len - 1, spec.grid - w);
      fill_diagonal(a, x0, y0, len, w, dir);
    }
    if (label_components(a).count >= 2) return a;
  }
  throw Error("layout", "generation-failure",
              "no layout with >= 2 components in 100 attempts for id '" + spec.id + "'");
}

std::vector<LibraryEntry> build_library(const LibraryConfig& config) {
  // Line-array parameters cycle through this table; every width is thin
  // enough to pinch and every gap (pitch - width) narrow enough to bridge
  // with the default element scales.
  constexpr std::array<std::pair<int, int>, 5> kLineParams{
      {{4, 10}, {3, 8}, {5, 12}, {6, 14}, {4, 12}}};

  std::vector<LibraryEntry> out;
  out.reserve(static_cast<std::size_t>(config.composite_count) + config.horizontal_count +
              config.vertical_count);

  auto derive_seed = [&](const std::string& id) {
    return SeedMixer(config.master_seed).absorb(std::string_view(id)).finish();
  };

  for (int i = 0; i < config.composite_count; ++i) {
    LayoutSpec spec;
    spec.kind = LayoutKind::composite;
    spec.id = numbered_id('c', i);
    spec.grid = config.grid;
    spec.seed = derive_seed(spec.id);
    out.push_back({spec, make_composite(spec)});
  }
  for (int i = 0; i < config.horizontal_count; ++i) {
    LayoutSpec spec;
    spec.kind = LayoutKind::horizontal_lines;
    spec.id = numbered_id('h', i);
    spec.grid = config.grid;
    const auto& [w, p] = kLineParams[static_cast<std::size_t>(i) % kLineParams.size()];
    spec.line_width = w;
    spec.pitch = p;
    spec.seed = derive_seed(spec.id);
    out.push_back({spec, make_line_array(spec)});
  }
  for (int i = 0; i < config.vertical_count; ++i) {
    LayoutSpec spec;
    spec.kind = LayoutKind::vertical_lines;
    spec.id = numbered_id('v', i);
    spec.grid = config.grid;
    const auto& [w, p] = kLineParams[static_cast<std::size_t>(i) % kLineParams.size()];
    spec.line_width = w;
    spec.pitch = p;
    spec.seed = derive_seed(spec.id);
    out.push_back({spec, make_line_array(spec)});
  }
  return out;
}

}  // namespace litho
