#include "litho/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "litho/errors.hpp"
#include "litho/io.hpp"

namespace litho {

namespace {

using nlohmann::json;

std::string format_ap(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

double iou(const Box& a, const Box& b) {
  if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0)
    throw Error("evaluate", "degenerate-box", "box with non-positive extent");
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return inter <= 0.0 ? 0.0 : inter / uni;
}

Box box_from_mask(const BinaryLayout& mask) {
  int x0 = mask.width, y0 = mask.height, x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw Error("evaluate", "empty-mask", "mask has no foreground pixels");
  return Box{static_cast<double>(x0), static_cast<double>(y0),
             static_cast<double>(x1 - x0 + 1), static_cast<double>(y1 - y0 + 1)};
}

std::vector<Box> boxes_from_masks(const std::vector<AnnotationInstance>& instances) {
  std::vector<Box> boxes;
  boxes.reserve(instances.size());
  for (const AnnotationInstance& inst : instances)
    boxes.push_back(box_from_mask(rle_decode(inst.rle)));
  return boxes;
}

std::vector<bool> match_detections(const std::vector<Box>& gts, const std::vector<Box>& dets,
                                   double iou_thr) {
  std::vector<bool> tp(dets.size(), false);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    double best = 0.0;
    std::size_t best_g = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double overlap = iou(dets[d], gts[g]);
      if (overlap >= iou_thr && overlap > best) {
        best = overlap;
        best_g = g;
      }
    }
    if (best_g < gts.size()) {
      taken[best_g] = true;
      tp[d] = true;
    }
  }
  return tp;
}

double average_precision(const std::vector<MatchPoint>& stream, std::int64_t gt_count) {
  if (gt_count <= 0)
    throw Error("evaluate", "undefined-ap", "class has zero ground-truth instances");
  const std::size_t m = stream.size();
  std::vector<double> recall(m), precision(m);
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < m; ++i) {
    tp += stream[i].tp ? 1 : 0;
    recall[i] = static_cast<double>(tp) / static_cast<double>(gt_count);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  // Right-to-left monotone envelope.
  std::vector<double> envelope(m);
  double running = 0.0;
  for (std::size_t i = m; i > 0; --i) {
    running = std::max(running, precision[i - 1]);
    envelope[i - 1] = running;
  }
  double sum = 0.0;
  std::size_t i = 0;
  for (int k = 0; k <= 100; ++k) {
    const double t = k / 100.0;
    while (i < m && recall[i] < t) ++i;
    if (i < m) sum += envelope[i];
  }
  return sum / 101.0;
}

EvalReport evaluate_detections(const CocoFile& gt, const std::vector<Detection>& detections,
                               const EvalConfig& cfg) {
  std::set<std::string> image_ids;
  for (const ManifestImage& img : gt.images) image_ids.insert(img.id);
  std::set<int> category_ids;
  for (const auto& [id, name] : gt.categories) category_ids.insert(id);

  // Per (class, image) buckets; detections keep their insertion order.
  struct Det {
    Box box;
    double score;
    std::size_t order;
  };
  std::map<int, std::map<std::string, std::vector<Box>>> gt_boxes;
  std::map<int, std::map<std::string, std::vector<Det>>> det_boxes;
  std::map<int, std::int64_t> gt_counts;

  for (const ManifestAnnotation& ann : gt.annotations) {
    gt_boxes[ann.category_id][ann.image_id].push_back(
        Box{static_cast<double>(ann.bbox_x), static_cast<double>(ann.bbox_y),
            static_cast<double>(ann.bbox_w), static_cast<double>(ann.bbox_h)});
    ++gt_counts[ann.category_id];
  }
  for (std::size_t d = 0; d < detections.size(); ++d) {
    const Detection& det = detections[d];
    if (!image_ids.count(det.image_id))
      throw Error("evaluate", "unknown-image-id",
                  "detection " + std::to_string(d) + " references image '" + det.image_id +
                      "' absent from the ground truth");
    if (!category_ids.count(det.category_id))
      throw Error("evaluate", "unknown-category",
                  "detection " + std::to_string(d) + " has category " +
                      std::to_string(det.category_id));
    const Box box = det.has_mask ? box_from_mask(rle_decode(det.mask)) : det.box;
    det_boxes[det.category_id][det.image_id].push_back(Det{box, det.score, d});
  }

  std::set<int> present;
  for (const auto& [c, n] : gt_counts)
    if (n > 0) present.insert(c);
  for (const auto& [c, per_image] : det_boxes) present.insert(c);

  EvalReport report;
  report.image_count = static_cast<std::int64_t>(gt.images.size());
  report.detection_count = static_cast<std::int64_t>(detections.size());
  double ap_sum = 0.0;
  int ap_classes = 0;

  for (const int category : present) {
    ClassEval ce;
    ce.category_id = category;
    for (const auto& [id, name] : gt.categories)
      if (id == category) ce.name = name;
    ce.gt_count = gt_counts.count(category) ? gt_counts[category] : 0;

    // Match per image, then merge into one score-ordered stream.
    std::vector<MatchPoint> stream;
    std::vector<std::size_t> order;
    auto& per_image = det_boxes[category];
    for (auto& [image_id, dets] : per_image) {
      std::stable_sort(dets.begin(), dets.end(), [](const Det& a, const Det& b) {
        return a.score > b.score;  // ties keep insertion order
      });
      std::vector<Box> boxes;
      boxes.reserve(dets.size());
      for (const Det& d : dets) boxes.push_back(d.box);
      const std::vector<Box>& gts = gt_boxes[category][image_id];
      const std::vector<bool> tp = match_detections(gts, boxes, cfg.iou_thr);
      for (std::size_t i = 0; i < dets.size(); ++i) {
        stream.push_back(MatchPoint{dets[i].score, tp[i]});
        order.push_back(dets[i].order);
      }
    }
    std::vector<std::size_t> idx(stream.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (stream[a].score != stream[b].score) return stream[a].score > stream[b].score;
      return order[a] < order[b];
    });
    std::vector<MatchPoint> sorted;
    sorted.reserve(stream.size());
    for (const std::size_t i : idx) sorted.push_back(stream[i]);

    ce.det_count = static_cast<std::int64_t>(sorted.size());
    std::int64_t tp_total = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      tp_total += sorted[i].tp ? 1 : 0;
      if (ce.gt_count > 0)
        ce.pr.emplace_back(static_cast<double>(tp_total) / static_cast<double>(ce.gt_count),
                           static_cast<double>(tp_total) / static_cast<double>(i + 1));
      if (sorted[i].score >= cfg.score_thr) {
        if (sorted[i].tp)
          ++ce.tp;
        else
          ++ce.fp;
      }
    }
    ce.fn = ce.gt_count - ce.tp;
    if (ce.gt_count > 0) {
      ce.has_ap = true;
      ce.ap = average_precision(sorted, ce.gt_count);
      ap_sum += ce.ap;
      ++ap_classes;
    }
    report.classes.push_back(std::move(ce));
  }
  report.map_50 = ap_classes > 0 ? ap_sum / ap_classes : 0.0;
  return report;
}

std::vector<Detection> load_predictions(const std::filesystem::path& path) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error("evaluate", "malformed-json", path.string() + ": " + e.what());
  }
  if (!root.is_array())
    throw Error("evaluate", "malformed-json",
                path.string() + ": top level must be an array of detections");
  std::vector<Detection> out;
  out.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& j = root[i];
    const std::string where = path.string() + ": detection " + std::to_string(i);
    try {
      Detection det;
      det.image_id = j.at("image_id").get<std::string>();
      det.category_id = j.at("category_id").get<int>();
      det.score = j.at("score").get<double>();
      if (det.score < 0.0 || det.score > 1.0)
        throw Error("evaluate", "malformed-json", where + ": score outside [0, 1]");
      if (j.contains("segmentation")) {
        det.has_mask = true;
        const json& seg = j.at("segmentation");
        det.mask.height = seg.at("size").at(0).get<int>();
        det.mask.width = seg.at("size").at(1).get<int>();
        det.mask.counts = seg.at("counts").get<std::vector<std::int64_t>>();
      } else {
        const json& bbox = j.at("bbox");
        det.box = Box{bbox.at(0).get<double>(), bbox.at(1).get<double>(),
                      bbox.at(2).get<double>(), bbox.at(3).get<double>()};
        if (det.box.w <= 0 || det.box.h <= 0)
          throw Error("evaluate", "malformed-json", where + ": non-positive box extent");
      }
      out.push_back(std::move(det));
    } catch (const json::exception& e) {
      throw Error("evaluate", "malformed-json", where + ": " + e.what());
    }
  }
  return out;
}

EvalReport evaluate_files(const std::filesystem::path& gt_path,
                          const std::filesystem::path& pred_path, const EvalConfig& cfg) {
  return evaluate_detections(load_coco(gt_path), load_predictions(pred_path), cfg);
}

void write_report_json(const std::filesystem::path& path, const EvalReport& report) {
  json root;
  root["format_version"] = 1;
  root["map_50"] = report.map_50;
  root["image_count"] = report.image_count;
  root["detection_count"] = report.detection_count;
  root["classes"] = json::array();
  for (const ClassEval& ce : report.classes) {
    json c;
    c["category_id"] = ce.category_id;
    c["name"] = ce.name;
    c["gt_count"] = ce.gt_count;
    c["det_count"] = ce.det_count;
    c["ap_50"] = ce.has_ap ? json(ce.ap) : json(nullptr);
    c["tp"] = ce.tp;
    c["fp"] = ce.fp;
    c["fn"] = ce.fn;
    json pr = json::array();
    for (const auto& [r, p] : ce.pr) pr.push_back(json::array({r, p}));
    c["pr_curve"] = std::move(pr);
    root["classes"].push_back(std::move(c));
  }
  write_text_file(path, root.dump(2) + "\n");
}

std::string report_table(const EvalReport& report) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %8s %8s %8s %8s %10s\n", "class", "gt", "tp", "fp",
                "fn", "ap@0.5");
  out << line;
  for (const ClassEval& ce : report.classes) {
    std::snprintf(line, sizeof line, "%-14s %8lld %8lld %8lld %8lld %10s\n", ce.name.c_str(),
                  static_cast<long long>(ce.gt_count), static_cast<long long>(ce.tp),
                  static_cast<long long>(ce.fp), static_cast<long long>(ce.fn),
                  ce.has_ap ? format_ap(ce.ap).c_str() : "-");
    out << line;
  }
  std::snprintf(line, sizeof line, "%-14s %8s %8s %8s %8s %10s\n", "mAP@0.5", "", "", "", "",
                format_ap(report.map_50).c_str());
  out << line;
  return out.str();
}

}  // namespace litho
