#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litho/grid.hpp"
#include "litho/injection.hpp"
#include "litho/render.hpp"
#include "litho/topology.hpp"

namespace litho {

// Column-major uncompressed-counts run-length encoding: alternating
// background / foreground run lengths, starting with background.
struct Rle {
  int width = 0;
  int height = 0;
  std::vector<std::int64_t> counts;
};

Rle rle_encode(const BinaryLayout& mask);

// Throws Error("annotate", "malformed-rle") when counts are negative or do
// not sum to width * height.
BinaryLayout rle_decode(const Rle& rle);

// Text form "<width> <height> <c0> <c1> ...", the at-rest storage format.
std::string rle_to_string(const Rle& rle);
Rle rle_from_string(const std::string& text);

struct AnnotateConfig {
  int min_area = 3;  // components below this pixel count are discarded
};

struct AnnotationInstance {
  int instance_id = 0;
  std::string image_id;
  DefectClass cls = DefectClass::none;
  Rle rle;
  int bbox_x = 0, bbox_y = 0, bbox_w = 0, bbox_h = 0;  // tight, pixel units
  std::int64_t area = 0;
};

// Pixel-wise XOR of the binary channels.  Throws
// Error("annotate", "dimension-mismatch") on differing dimensions.
BinaryLayout diff_mask(const RenderedImage& b, const RenderedImage& b_prime);
BinaryLayout diff_mask(const BinaryLayout& b, const BinaryLayout& b_prime);

struct ExtractResult {
  std::vector<AnnotationInstance> instances;
  int discarded = 0;  // sub-threshold components
};

// One instance per 8-connected diff component with area >= cfg.min_area, all
// carrying the record's class.  Throws Error("annotate", "empty-annotation")
// when nothing survives; the caller excludes and logs the pair.
ExtractResult extract_instances(const BinaryLayout& diff, const DefectRecord& record,
                                const std::string& image_id, const AnnotateConfig& cfg);

}  // namespace litho
