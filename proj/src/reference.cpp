#include "litho/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace litho::reference {

BinaryLayout dilate_naive(const BinaryLayout& a, const StructuringElement& se) {
  BinaryLayout out(a.width, a.height);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      std::uint8_t v = 0;
      for (const auto& [dx, dy] : se.offsets) {
        const int sx = x - dx, sy = y - dy;
        if (a.in_bounds(sx, sy) && a.at(sx, sy)) {
          v = 1;
          break;
        }
      }
      out.set(x, y, v);
    }
  }
  return out;
}

BinaryLayout erode_naive(const BinaryLayout& a, const StructuringElement& se) {
  BinaryLayout out(a.width, a.height);
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      std::uint8_t v = 1;
      for (const auto& [dx, dy] : se.offsets) {
        const int sx = x + dx, sy = y + dy;
        if (a.in_bounds(sx, sy) && !a.at(sx, sy)) {
          v = 0;
          break;
        }
      }
      out.set(x, y, v);
    }
  }
  return out;
}

std::vector<std::int32_t> label_flood(const BinaryLayout& a, int* count) {
  std::vector<std::int32_t> labels(a.size(), 0);
  std::int32_t next = 0;
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      if (!a.at(x, y) || labels[static_cast<std::size_t>(y) * a.width + x]) continue;
      ++next;
      labels[static_cast<std::size_t>(y) * a.width + x] = next;
      queue.emplace_back(x, y);
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (!dx && !dy) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (!a.in_bounds(nx, ny) || !a.at(nx, ny)) continue;
            std::int32_t& slot = labels[static_cast<std::size_t>(ny) * a.width + nx];
            if (slot) continue;
            slot = next;
            queue.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  if (count) *count = next;
  return labels;
}

int count_components_flood(const BinaryLayout& a) {
  int count = 0;
  label_flood(a, &count);
  return count;
}

std::vector<double> render_gray_direct(const BinaryLayout& a, const RenderConfig& cfg) {
  const int n = cfg.output_size;
  std::vector<double> up(static_cast<std::size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    double sy = (y + 0.5) / cfg.scale - 0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(a.height - 1));
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, a.height - 1);
    const double wy = sy - y0;
    for (int x = 0; x < n; ++x) {
      double sx = (x + 0.5) / cfg.scale - 0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(a.width - 1));
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, a.width - 1);
      const double wx = sx - x0;
      const double top = (1.0 - wx) * a.at(x0, y0) + wx * a.at(x1, y0);
      const double bot = (1.0 - wx) * a.at(x0, y1) + wx * a.at(x1, y1);
      up[static_cast<std::size_t>(y) * n + x] = (1.0 - wy) * top + wy * bot;
    }
  }
  if (cfg.psf_sigma <= 0.0) return up;

  const std::vector<double> taps = make_gaussian_kernel(cfg.psf_sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<double> out(up.size());
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int ky = -radius; ky <= radius; ++ky) {
        const int sy = std::clamp(y + ky, 0, n - 1);
        for (int kx = -radius; kx <= radius; ++kx) {
          const int sx = std::clamp(x + kx, 0, n - 1);
          acc += taps[static_cast<std::size_t>(ky + radius)] *
                 taps[static_cast<std::size_t>(kx + radius)] *
                 up[static_cast<std::size_t>(sy) * n + sx];
        }
      }
      out[static_cast<std::size_t>(y) * n + x] = acc;
    }
  }
  return out;
}

ApResult evaluate_bruteforce(const CocoFile& gt, const std::vector<Detection>& detections,
                             double iou_thr) {
  ApResult result;
  std::map<int, std::int64_t> gt_counts;
  for (const ManifestAnnotation& ann : gt.annotations) ++gt_counts[ann.category_id];

  for (const auto& [category, total_gt] : gt_counts) {
    if (total_gt <= 0) continue;

    struct Entry {
      double score;
      std::size_t order;
      bool tp;
    };
    std::vector<Entry> entries;

    // Walk image by image; inside an image, process detections in score
    // order and let each claim its best remaining ground truth.
    for (const ManifestImage& image : gt.images) {
      std::vector<Box> gts;
      for (const ManifestAnnotation& ann : gt.annotations)
        if (ann.category_id == category && ann.image_id == image.id)
          gts.push_back(Box{static_cast<double>(ann.bbox_x), static_cast<double>(ann.bbox_y),
                            static_cast<double>(ann.bbox_w), static_cast<double>(ann.bbox_h)});
      std::vector<std::pair<double, std::size_t>> local;  // (score, global index)
      for (std::size_t d = 0; d < detections.size(); ++d)
        if (detections[d].category_id == category && detections[d].image_id == image.id)
          local.emplace_back(detections[d].score, d);
      std::stable_sort(local.begin(), local.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });

      std::vector<bool> used(gts.size(), false);
      for (const auto& [score, d] : local) {
        const Detection& det = detections[d];
        const Box box = det.has_mask ? box_from_mask(rle_decode(det.mask)) : det.box;
        double best = 0.0;
        std::ptrdiff_t pick = -1;
        for (std::size_t g = 0; g < gts.size(); ++g) {
          if (used[g]) continue;
          const double overlap = iou(box, gts[g]);
          if (overlap >= iou_thr && overlap > best) {
            best = overlap;
            pick = static_cast<std::ptrdiff_t>(g);
          }
        }
        const bool tp = pick >= 0;
        if (tp) used[static_cast<std::size_t>(pick)] = true;
        entries.push_back(Entry{score, d, tp});
      }
    }

    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.order < b.order;
    });

    std::vector<double> recall, precision;
    std::int64_t tp = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      tp += entries[i].tp ? 1 : 0;
      recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
      precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    }
    double sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double t = k / 100.0;
      double best = 0.0;
      for (std::size_t i = 0; i < recall.size(); ++i)
        if (recall[i] >= t) best = std::max(best, precision[i]);
      sum += best;
    }
    result.per_class_ap[category] = sum / 101.0;
  }

  double total = 0.0;
  for (const auto& [category, ap] : result.per_class_ap) total += ap;
  result.map_50 =
      result.per_class_ap.empty() ? 0.0 : total / static_cast<double>(result.per_class_ap.size());
  return result;
}

}  // namespace litho::reference
