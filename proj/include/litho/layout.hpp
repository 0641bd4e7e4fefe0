#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litho/grid.hpp"

namespace litho {

enum class LayoutKind { horizontal_lines, vertical_lines, composite };

std::string to_string(LayoutKind kind);
LayoutKind layout_kind_from_string(const std::string& name);

// Parameters for one base layout.  offset < 0 selects the default phase of
// pitch / 2 so line arrays do not touch the grid border; seed is used by the
// composite generator only.
struct LayoutSpec {
  LayoutKind kind = LayoutKind::composite;
  int line_width = 0;
  int pitch = 0;
  int offset = -1;
  std::uint64_t seed = 0;
  std::string id;
  int grid = 128;

  int effective_offset() const { return offset >= 0 ? offset : pitch / 2; }
};

struct LibraryConfig {
  int composite_count = 15;
  int horizontal_count = 5;
  int vertical_count = 5;
  std::uint64_t master_seed = 0;
  int grid = 128;
};

struct LibraryEntry {
  LayoutSpec spec;
  BinaryLayout layout;
};

// Parallel lines of the given width and pitch.  Throws
// Error("layout", "invalid-spec") unless line_width >= 1 and pitch > line_width.
BinaryLayout make_line_array(const LayoutSpec& spec);

// Number of lines make_line_array produces, computed analytically.
int line_count(const LayoutSpec& spec);

// Seeded layout of 4-12 axis-aligned rectangles plus 0-4 diagonal bars with
// stroke widths in [3, 10], retried until it has at least 2 components.
// Throws Error("layout", "generation-failure") after 100 failed attempts.
BinaryLayout make_composite(const LayoutSpec& spec);

// The full base-layout library: composites first (c00..), then horizontal
// (h00..) and vertical (v00..) line arrays.  Deterministic in config.
std::vector<LibraryEntry> build_library(const LibraryConfig& config);

}  // namespace litho
