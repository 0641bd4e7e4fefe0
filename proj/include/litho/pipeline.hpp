#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "litho/annotate.hpp"
#include "litho/dataset.hpp"
#include "litho/injection.hpp"
#include "litho/layout.hpp"
#include "litho/render.hpp"

namespace litho {

// Everything one generation run depends on.  All stage seeds derive from
// master_seed, so the whole run is a pure function of this struct.
struct PipelineConfig {
  std::uint64_t master_seed = 0;
  std::string out_dir = "dataset";
  LibraryConfig library;   // master_seed field is derived, not read from file
  PlanConfig plan;         // ditto
  RenderConfig render;
  AnnotateConfig annotate;
  SplitRatios ratios;
  StatsConfig stats;
};

// JSON config I/O.  Loading is strict: unknown keys raise
// Error("cli", "config-error") so typos never silently fall back to defaults.
// Missing keys keep their defaults; save/load round-trips losslessly.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const std::filesystem::path& path, const PipelineConfig& cfg);
std::string pipeline_config_hash(const PipelineConfig& cfg);

struct GenerateOptions {
  std::string out_dir_override;  // empty = use config value
  int workers = 0;               // 0 = runtime default
  bool seed_overridden = false;
  std::uint64_t seed_override = 0;
};

struct GenerateSummary {
  std::string out_dir;
  std::string config_hash;
  int layouts = 0;
  int jobs = 0;
  int accepted = 0;
  int skipped = 0;
  int excluded_pairs = 0;          // empty-annotation exclusions
  int discarded_components = 0;    // sub-threshold diff fragments
  int epe_measured = 0;
  double spearman_rho = 0.0;       // rank correlation of |delta_b_max| vs measured EPE
  std::map<std::string, int> images_per_split;
  std::map<std::string, int> annotations_per_class;
};

// The full generation pipeline: library -> plan -> execute -> render ->
// annotate -> export -> stats.  Writes, under out_dir: layouts/ images/
// masks/ annotations/ stats/ records.jsonl library_manifest.json
// skip_report.json summary.json summary.txt config.json.  All artifacts are
// byte-stable for a fixed config, independent of worker count.
GenerateSummary run_generate(const PipelineConfig& cfg, const GenerateOptions& opts);

// Recomputes the stats CSVs for one split of an exported dataset directory.
void run_stats(const std::filesystem::path& dataset_dir, Split split, const StatsConfig& cfg);

}  // namespace litho
