#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "litho/annotate.hpp"
#include "litho/dataset.hpp"

namespace litho {

// Real-valued axis-aligned box, COCO layout: top-left corner plus size.
struct Box {
  double x = 0, y = 0, w = 0, h = 0;
};

// Intersection-over-union.  Throws Error("evaluate", "degenerate-box") when
// either box has w <= 0 or h <= 0.
double iou(const Box& a, const Box& b);

// Tight box around a mask's foreground.  Throws
// Error("evaluate", "empty-mask") when no pixel is set.
Box box_from_mask(const BinaryLayout& mask);
std::vector<Box> boxes_from_masks(const std::vector<AnnotationInstance>& instances);

struct Detection {
  std::string image_id;
  int category_id = 0;
  Box box;
  double score = 0.0;
  bool has_mask = false;
  Rle mask;  // when present, the box is derived from it
};

struct EvalConfig {
  double iou_thr = 0.5;    // match acceptance threshold
  double score_thr = 0.5;  // reference threshold for the TP/FP/FN counts
};

// One scored detection after matching, in global score order.
struct MatchPoint {
  double score = 0.0;
  bool tp = false;
};

// Greedy per-image matching of one class: detections in score order (ties by
// insertion order) claim the unmatched ground truth with highest IoU >=
// iou_thr.  gts/dets must already be restricted to one (image, class).
std::vector<bool> match_detections(const std::vector<Box>& gts,
                                   const std::vector<Box>& dets, double iou_thr);

// 101-point interpolated average precision over a class's match stream.
// Throws Error("evaluate", "undefined-ap") when gt_count is zero.
double average_precision(const std::vector<MatchPoint>& stream, std::int64_t gt_count);

struct ClassEval {
  int category_id = 0;
  std::string name;
  std::int64_t gt_count = 0;
  std::int64_t det_count = 0;
  bool has_ap = false;  // false when the class has no ground truth
  double ap = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0;  // at score >= cfg.score_thr
  std::vector<std::pair<double, double>> pr;  // (recall, precision) per stream point
};

struct EvalReport {
  std::vector<ClassEval> classes;  // category-id order; GT- or det-present only
  double map_50 = 0.0;             // mean AP over GT-present classes
  std::int64_t image_count = 0;
  std::int64_t detection_count = 0;
};

// Scores detections against a parsed ground-truth file.  Detection image ids
// and categories must exist in the ground truth
// (Error("evaluate", "unknown-image-id") / Error("evaluate", "unknown-category")).
EvalReport evaluate_detections(const CocoFile& gt, const std::vector<Detection>& detections,
                               const EvalConfig& cfg);

// Parses a JSON array of {image_id, category_id, bbox, score, optional
// segmentation}.  Throws Error("evaluate", "malformed-json") with context.
std::vector<Detection> load_predictions(const std::filesystem::path& path);

// load_coco + load_predictions + evaluate_detections.
EvalReport evaluate_files(const std::filesystem::path& gt_path,
                          const std::filesystem::path& pred_path, const EvalConfig& cfg);

void write_report_json(const std::filesystem::path& path, const EvalReport& report);
std::string report_table(const EvalReport& report);

}  // namespace litho
