#pragma once

// Straight-line serial reference implementations, deliberately written in the
// most obvious form available.  Production code never calls these; tests use
// them as oracles and the benchmark target compares against them.

#include <cstdint>
#include <map>
#include <vector>

#include "litho/eval.hpp"
#include "litho/grid.hpp"
#include "litho/morphology.hpp"
#include "litho/render.hpp"

namespace litho::reference {

// O(N * |k|) double loop over every pixel and offset; outside reads are
// background for dilation and foreground for erosion.
BinaryLayout dilate_naive(const BinaryLayout& a, const StructuringElement& se);
BinaryLayout erode_naive(const BinaryLayout& a, const StructuringElement& se);

// BFS flood fill, 8-connectivity, labels numbered by raster-scan first touch.
std::vector<std::int32_t> label_flood(const BinaryLayout& a, int* count = nullptr);
int count_components_flood(const BinaryLayout& a);

// Bilinear upscale + direct (non-separable) 2-D Gaussian convolution in
// double precision; the grayscale stage of the renderer without noise.
std::vector<double> render_gray_direct(const BinaryLayout& a, const RenderConfig& cfg);

// Independent evaluator: per-(image, class) exhaustive greedy matching and a
// scan-per-recall-point 101-point AP.
struct ApResult {
  std::map<int, double> per_class_ap;  // GT-present classes only
  double map_50 = 0.0;
};
ApResult evaluate_bruteforce(const CocoFile& gt, const std::vector<Detection>& detections,
                             double iou_thr);

}  // namespace litho::reference
