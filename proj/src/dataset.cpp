#include "litho/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "litho/errors.hpp"
#include "litho/io.hpp"
#include "litho/rng.hpp"

namespace litho {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json rle_to_coco_json(const Rle& rle) {
  json seg;
  seg["size"] = json::array({rle.height, rle.width});
  seg["counts"] = rle.counts;
  return seg;
}

Rle rle_from_coco_json(const json& seg) {
  Rle rle;
  try {
    rle.height = seg.at("size").at(0).get<int>();
    rle.width = seg.at("size").at(1).get<int>();
    rle.counts = seg.at("counts").get<std::vector<std::int64_t>>();
  } catch (const json::exception& e) {
    throw Error("export", "schema-violation", std::string("bad segmentation: ") + e.what());
  }
  return rle;
}

void validate_manifest(const DatasetManifest& manifest) {
  std::set<std::string> image_ids;
  std::map<std::string, Split> layout_split;
  for (const ManifestImage& img : manifest.images) {
    if (!image_ids.insert(img.id).second)
      throw Error("export", "schema-violation", "duplicate image id '" + img.id + "'");
    if (img.width <= 0 || img.height <= 0)
      throw Error("export", "schema-violation", "non-positive dimensions on '" + img.id + "'");
    const auto [it, inserted] = layout_split.emplace(img.base_layout_id, img.split);
    if (!inserted && it->second != img.split)
      throw Error("export", "schema-violation",
                  "layout '" + img.base_layout_id + "' spans two splits");
  }
  std::set<int> category_ids;
  for (const Category& c : kCategories) category_ids.insert(c.id);
  std::set<int> annotation_ids;
  std::map<std::string, const ManifestImage*> by_id;
  for (const ManifestImage& img : manifest.images) by_id[img.id] = &img;
  for (const ManifestAnnotation& ann : manifest.annotations) {
    if (!annotation_ids.insert(ann.id).second)
      throw Error("export", "schema-violation",
                  "duplicate annotation id " + std::to_string(ann.id));
    const auto img = by_id.find(ann.image_id);
    if (img == by_id.end())
      throw Error("export", "schema-violation",
                  "annotation " + std::to_string(ann.id) + " references missing image '" +
                      ann.image_id + "'");
    if (!category_ids.count(ann.category_id))
      throw Error("export", "schema-violation",
                  "annotation " + std::to_string(ann.id) + " has unknown category " +
                      std::to_string(ann.category_id));
    if (ann.area < 1)
      throw Error("export", "schema-violation",
                  "annotation " + std::to_string(ann.id) + " has area < 1");
    if (ann.bbox_x < 0 || ann.bbox_y < 0 || ann.bbox_w < 1 || ann.bbox_h < 1 ||
        ann.bbox_x + ann.bbox_w > img->second->width ||
        ann.bbox_y + ann.bbox_h > img->second->height)
      throw Error("export", "schema-violation",
                  "annotation " + std::to_string(ann.id) + " bbox outside its image");
  }
}

}  // namespace

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  throw Error("export", "schema-violation", "no split named '" + name + "'");
}

std::map<std::string, Split> split_dataset(const std::vector<SplitItem>& items,
                                           const SplitRatios& ratios, std::uint64_t seed) {
  const double sum = ratios.train + ratios.val + ratios.test;
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0 || std::abs(sum - 1.0) > 1e-9)
    throw Error("export", "invalid-ratios", "ratios must be non-negative and sum to 1");

  std::int64_t total = 0;
  for (const SplitItem& item : items) total += item.image_count;

  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(
                                rng.uniform_int(0, static_cast<int>(i) - 1))]);

  std::array<double, 3> assigned{0.0, 0.0, 0.0};
  std::array<int, 3> layouts{0, 0, 0};
  std::map<std::string, Split> result;
  std::vector<std::vector<std::size_t>> members(3);
  for (const std::size_t idx : order) {
    int best = 0;
    double best_need = -1e300;
    for (int s = 0; s < 3; ++s) {
      const double need =
          ratios.of(kSplits[static_cast<std::size_t>(s)]) * static_cast<double>(total) -
          assigned[static_cast<std::size_t>(s)];
      if (need > best_need + 1e-12) {
        best_need = need;
        best = s;
      }
    }
    result[items[idx].layout_id] = kSplits[static_cast<std::size_t>(best)];
    assigned[static_cast<std::size_t>(best)] += items[idx].image_count;
    layouts[static_cast<std::size_t>(best)] += 1;
    members[static_cast<std::size_t>(best)].push_back(idx);
  }

  // Repair: a positive-ratio split must not stay empty; donate from the
  // split holding the most layouts.
  for (int s = 0; s < 3; ++s) {
    if (ratios.of(kSplits[static_cast<std::size_t>(s)]) <= 0.0 ||
        layouts[static_cast<std::size_t>(s)] > 0)
      continue;
    int donor = -1;
    for (int d = 0; d < 3; ++d)
      if (layouts[static_cast<std::size_t>(d)] > 1 &&
          (donor < 0 ||
           layouts[static_cast<std::size_t>(d)] > layouts[static_cast<std::size_t>(donor)]))
        donor = d;
    if (donor < 0)
      throw Error("export", "insufficient-layouts",
                  "cannot give any layout to split '" +
                      to_string(kSplits[static_cast<std::size_t>(s)]) + "'");
    // Move the donor's smallest layout (latest-assigned on ties).
    auto& pool = members[static_cast<std::size_t>(donor)];
    std::size_t pick = 0;
    for (std::size_t i = 1; i < pool.size(); ++i)
      if (items[pool[i]].image_count <= items[pool[pick]].image_count) pick = i;
    const std::size_t idx = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    members[static_cast<std::size_t>(s)].push_back(idx);
    layouts[static_cast<std::size_t>(donor)] -= 1;
    layouts[static_cast<std::size_t>(s)] += 1;
    result[items[idx].layout_id] = kSplits[static_cast<std::size_t>(s)];
  }
  return result;
}

int category_id_of(DefectClass cls) {
  switch (cls) {
    case DefectClass::bridge: return 1;
    case DefectClass::burr: return 2;
    case DefectClass::pinch: return 3;
    case DefectClass::contamination: return 4;
    case DefectClass::none: break;
  }
  throw Error("export", "schema-violation", "class 'none' has no category");
}

DefectClass class_of_category(int category_id) {
  switch (category_id) {
    case 1: return DefectClass::bridge;
    case 2: return DefectClass::burr;
    case 3: return DefectClass::pinch;
    case 4: return DefectClass::contamination;
  }
  throw Error("export", "schema-violation",
              "unknown category id " + std::to_string(category_id));
}

void export_coco(const DatasetManifest& manifest, const std::filesystem::path& out_dir) {
  validate_manifest(manifest);
  std::filesystem::create_directories(out_dir / "annotations");

  for (const Split split : kSplits) {
    std::vector<const ManifestImage*> images;
    for (const ManifestImage& img : manifest.images)
      if (img.split == split) images.push_back(&img);
    std::sort(images.begin(), images.end(),
              [](const ManifestImage* a, const ManifestImage* b) { return a->id < b->id; });
    std::set<std::string> split_ids;
    for (const ManifestImage* img : images) split_ids.insert(img->id);

    std::vector<const ManifestAnnotation*> annotations;
    for (const ManifestAnnotation& ann : manifest.annotations)
      if (split_ids.count(ann.image_id)) annotations.push_back(&ann);
    std::sort(annotations.begin(), annotations.end(),
              [](const ManifestAnnotation* a, const ManifestAnnotation* b) {
                return a->id < b->id;
              });

    json root;
    root["format_version"] = 1;
    root["split"] = to_string(split);
    root["split_ratios"] =
        json::array({manifest.ratios.train, manifest.ratios.val, manifest.ratios.test});
    root["categories"] = json::array();
    for (const Category& c : kCategories)
      root["categories"].push_back({{"id", c.id}, {"name", c.name}});
    root["images"] = json::array();
    for (const ManifestImage* img : images)
      root["images"].push_back({{"id", img->id},
                                {"file_name", img->file_name},
                                {"width", img->width},
                                {"height", img->height},
                                {"base_layout_id", img->base_layout_id},
                                {"split", to_string(img->split)},
                                {"session", img->session}});
    root["annotations"] = json::array();
    for (const ManifestAnnotation* ann : annotations)
      root["annotations"].push_back(
          {{"id", ann->id},
           {"image_id", ann->image_id},
           {"category_id", ann->category_id},
           {"segmentation", rle_to_coco_json(ann->segmentation)},
           {"bbox", json::array({ann->bbox_x, ann->bbox_y, ann->bbox_w, ann->bbox_h})},
           {"area", ann->area},
           {"iscrowd", 0}});

    const std::filesystem::path path =
        out_dir / "annotations" / ("instances_" + to_string(split) + ".json");
    write_text_file(path, root.dump(2) + "\n");
  }
}

CocoFile load_coco(const std::filesystem::path& json_path) {
  json root = json::parse(read_text_file(json_path), nullptr, false);
  if (root.is_discarded())
    throw Error("export", "schema-violation", "unparseable JSON in " + json_path.string());
  CocoFile out;
  try {
    for (const json& c : root.at("categories"))
      out.categories.emplace_back(c.at("id").get<int>(), c.at("name").get<std::string>());
    for (const json& i : root.at("images")) {
      ManifestImage img;
      img.id = i.at("id").get<std::string>();
      img.file_name = i.at("file_name").get<std::string>();
      img.width = i.at("width").get<int>();
      img.height = i.at("height").get<int>();
      img.base_layout_id = i.at("base_layout_id").get<std::string>();
      img.split = split_from_string(i.at("split").get<std::string>());
      img.session = i.value("session", "");
      out.images.push_back(std::move(img));
    }
    for (const json& a : root.at("annotations")) {
      ManifestAnnotation ann;
      ann.id = a.at("id").get<int>();
      ann.image_id = a.at("image_id").get<std::string>();
      ann.category_id = a.at("category_id").get<int>();
      ann.segmentation = rle_from_coco_json(a.at("segmentation"));
      const json& bbox = a.at("bbox");
      ann.bbox_x = bbox.at(0).get<int>();
      ann.bbox_y = bbox.at(1).get<int>();
      ann.bbox_w = bbox.at(2).get<int>();
      ann.bbox_h = bbox.at(3).get<int>();
      ann.area = a.at("area").get<std::int64_t>();
      out.annotations.push_back(std::move(ann));
    }
  } catch (const json::exception& e) {
    throw Error("export", "schema-violation",
                "missing or mistyped field in " + json_path.string() + ": " + e.what());
  }
  return out;
}

StatsReport dataset_stats(const DatasetManifest& manifest, Split split,
                          const StatsConfig& cfg) {
  if (cfg.grid_dim < 1 || cfg.bins < 1 || !(cfg.min_pct > 0) || !(cfg.max_pct > cfg.min_pct))
    throw Error("export", "schema-violation", "bad stats configuration");
  StatsReport report;
  report.grid_dim = cfg.grid_dim;
  report.grid.assign(static_cast<std::size_t>(cfg.grid_dim) * cfg.grid_dim, 0);
  report.hist.assign(static_cast<std::size_t>(cfg.bins), 0);
  report.bin_edges.resize(static_cast<std::size_t>(cfg.bins) + 1);
  const double lo = std::log10(cfg.min_pct);
  const double hi = std::log10(cfg.max_pct);
  for (int i = 0; i <= cfg.bins; ++i)
    report.bin_edges[static_cast<std::size_t>(i)] =
        std::pow(10.0, lo + (hi - lo) * i / cfg.bins);

  std::map<std::string, const ManifestImage*> by_id;
  for (const ManifestImage& img : manifest.images)
    if (img.split == split) by_id[img.id] = &img;

  for (const ManifestAnnotation& ann : manifest.annotations) {
    const auto it = by_id.find(ann.image_id);
    if (it == by_id.end()) continue;
    const ManifestImage& img = *it->second;
    const BinaryLayout mask = rle_decode(ann.segmentation);
    for (int y = 0; y < mask.height; ++y) {
      for (int x = 0; x < mask.width; ++x) {
        if (!mask.at(x, y)) continue;
        const int cx = std::min(cfg.grid_dim - 1,
                                static_cast<int>(static_cast<std::int64_t>(x) * cfg.grid_dim /
                                                 mask.width));
        const int cy = std::min(cfg.grid_dim - 1,
                                static_cast<int>(static_cast<std::int64_t>(y) * cfg.grid_dim /
                                                 mask.height));
        ++report.grid[static_cast<std::size_t>(cy) * cfg.grid_dim + cx];
        ++report.total_pixels;
      }
    }
    const double pct =
        100.0 * static_cast<double>(ann.area) /
        (static_cast<double>(img.width) * static_cast<double>(img.height));
    const double clamped = std::clamp(pct, cfg.min_pct, cfg.max_pct);
    int bin = static_cast<int>(std::floor((std::log10(clamped) - lo) / (hi - lo) * cfg.bins));
    bin = std::clamp(bin, 0, cfg.bins - 1);
    ++report.hist[static_cast<std::size_t>(bin)];
    ++report.instance_count;
  }
  return report;
}

void write_density_csv(const std::filesystem::path& path, const StatsReport& report,
                       Split split) {
  std::ostringstream out;
  out << "# format_version=1\n";
  out << "# instance-mask pixel counts, " << report.grid_dim << "x" << report.grid_dim
      << " grid, split=" << to_string(split) << "\n";
  for (int y = 0; y < report.grid_dim; ++y) {
    for (int x = 0; x < report.grid_dim; ++x) {
      if (x) out << ",";
      out << report.grid[static_cast<std::size_t>(y) * report.grid_dim + x];
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_size_hist_csv(const std::filesystem::path& path, const StatsReport& report,
                         Split split) {
  std::ostringstream out;
  out << "# format_version=1\n";
  out << "# per-instance mask size, percent of image area, split=" << to_string(split) << "\n";
  out << "bin_low_pct,bin_high_pct,count\n";
  for (std::size_t i = 0; i < report.hist.size(); ++i)
    out << format_double(report.bin_edges[i]) << "," << format_double(report.bin_edges[i + 1])
        << "," << report.hist[i] << "\n";
  write_text_file(path, out.str());
}

}  // namespace litho
