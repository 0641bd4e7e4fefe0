#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "litho/annotate.hpp"
#include "litho/topology.hpp"

namespace litho {

enum class Split { train, val, test };

std::string to_string(Split split);
Split split_from_string(const std::string& name);
inline constexpr std::array<Split, 3> kSplits{Split::train, Split::val, Split::test};

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  double of(Split split) const {
    return split == Split::train ? train : split == Split::val ? val : test;
  }
};

struct SplitItem {
  std::string layout_id;
  int image_count = 0;
};

// Assigns whole layouts to splits: seeded shuffle, then each layout goes to
// the split with the largest remaining image-count need, with a repair pass
// so no positive-ratio split ends up empty.  Deterministic given seed.
// Throws Error("export", "invalid-ratios") unless ratios are non-negative and
// sum to 1 within 1e-9, and Error("export", "insufficient-layouts") when a
// positive-ratio split cannot receive a layout.
std::map<std::string, Split> split_dataset(const std::vector<SplitItem>& items,
                                           const SplitRatios& ratios, std::uint64_t seed);

struct Category {
  int id;
  const char* name;
};

// Stable category ids across all exports.
inline constexpr std::array<Category, 4> kCategories{
    Category{1, "bridge"}, Category{2, "burr"}, Category{3, "pinch"},
    Category{4, "contamination"}};

int category_id_of(DefectClass cls);  // throws Error("export", "schema-violation") for none
DefectClass class_of_category(int category_id);

struct ManifestImage {
  std::string id;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::string base_layout_id;
  Split split = Split::train;
  std::string session;  // reserved free-form tag
};

struct ManifestAnnotation {
  int id = 0;
  std::string image_id;
  int category_id = 0;
  Rle segmentation;
  int bbox_x = 0, bbox_y = 0, bbox_w = 0, bbox_h = 0;
  std::int64_t area = 0;
};

struct DatasetManifest {
  std::vector<ManifestImage> images;
  std::vector<ManifestAnnotation> annotations;
  SplitRatios ratios;
};

// Writes instances_<split>.json files under out_dir/annotations with sorted
// keys and fixed ordering (byte-stable for a fixed manifest).  Validates the
// manifest first; throws Error("export", "schema-violation") on dangling
// references, duplicate ids, or non-exclusive layouts.
void export_coco(const DatasetManifest& manifest, const std::filesystem::path& out_dir);

// Parses one instances_<split>.json back into manifest form.  Throws
// Error("export", "schema-violation") on malformed input.
struct CocoFile {
  std::vector<ManifestImage> images;
  std::vector<ManifestAnnotation> annotations;
  std::vector<std::pair<int, std::string>> categories;
};
CocoFile load_coco(const std::filesystem::path& json_path);

struct StatsConfig {
  int grid_dim = 70;          // density accumulation grid is grid_dim x grid_dim
  int bins = 50;              // log-spaced size-histogram bins
  double min_pct = 1e-3;      // histogram lower edge, percent of image area
  double max_pct = 10.0;      // histogram upper edge
};

struct StatsReport {
  int grid_dim = 0;
  std::vector<std::int64_t> grid;  // row-major grid_dim x grid_dim pixel counts
  std::vector<std::int64_t> hist;  // per-bin instance counts
  std::vector<double> bin_edges;   // bins + 1 edges, percent units
  std::int64_t total_pixels = 0;
  std::int64_t instance_count = 0;
};

// Accumulates instance-mask statistics over one split: per-cell annotated
// pixel counts and the per-instance size histogram (percent of image area,
// out-of-range sizes clamped into the boundary bins).
StatsReport dataset_stats(const DatasetManifest& manifest, Split split,
                          const StatsConfig& cfg);

void write_density_csv(const std::filesystem::path& path, const StatsReport& report,
                       Split split);
void write_size_hist_csv(const std::filesystem::path& path, const StatsReport& report,
                         Split split);

}  // namespace litho
