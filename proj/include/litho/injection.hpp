#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "litho/grid.hpp"
#include "litho/layout.hpp"
#include "litho/morphology.hpp"
#include "litho/topology.hpp"

namespace litho {

// The three synthesized populations: dilation with a square element, erosion
// with a square element, erosion with a diamond element.
enum class DefectGroup { bridge_square, pinch_square, pinch_diamond };

std::string to_string(DefectGroup group);
DefectGroup defect_group_from_string(const std::string& name);
std::string group_tag(DefectGroup group);  // short id fragment: bsq / psq / pdi
DefectClass target_class(DefectGroup group);
PerturbKind group_kind(DefectGroup group);
SeShape group_shape(DefectGroup group);

struct SamplerConfig {
  int se_scale_min = 2;
  int se_scale_max = 6;
  int max_attempts = 1000;
  PerturbMode mode = PerturbMode::footprint;
  int window_margin = -1;  // windowed mode only; -1 = 2 * element radius
  ClassifyConfig classify;
  EpeModel epe;
};

// Full provenance of one accepted defect: re-running perturb + classify from
// `spec` must reproduce `cls` and `delta_k` exactly.
struct DefectRecord {
  std::string id;
  std::string base_layout_id;
  DefectGroup group = DefectGroup::bridge_square;
  PerturbationSpec spec;
  int delta_k = 0;
  DefectClass cls = DefectClass::none;
  double delta_b_max = 0.0;       // max |delta_b| over 16 evenly spaced normals
  double predicted_epe_max = 0.0;  // meef * delta_b_max
  std::uint64_t seed = 0;
};

// Rejection-samples a perturbation whose class equals the group target:
// each attempt draws tx, ty uniform over the grid then r uniform over the
// scale range.  Deterministic in `seed`.  Throws
// Error("injection", "sampling-exhausted") after cfg.max_attempts rejections.
std::pair<BinaryLayout, DefectRecord> sample_defect(const BinaryLayout& a, DefectGroup group,
                                                    std::uint64_t seed,
                                                    const SamplerConfig& cfg);

struct DefectJob {
  std::string defect_id;
  std::string base_layout_id;
  DefectGroup group = DefectGroup::bridge_square;
  int index = 0;  // position within its (layout, group) block
  std::uint64_t seed = 0;
};

struct PlanConfig {
  int bridge_square_count = 50;
  int pinch_square_count = 50;
  int pinch_diamond_count = 50;
  std::uint64_t master_seed = 0;
  SamplerConfig sampler;

  int count_of(DefectGroup group) const;
};

struct DatasetPlan {
  std::vector<DefectJob> jobs;  // layout-major, group-major, index order
  SamplerConfig sampler;
};

// Schedules count_of(group) jobs per (library layout, group).  Job seeds are
// derived from (master seed, layout id, group, index) only, so the plan is a
// pure function of its inputs.
DatasetPlan generate_plan(const std::vector<LibraryEntry>& library, const PlanConfig& plan);

struct SkipEntry {
  std::string defect_id;
  std::string base_layout_id;
  std::string group;
  std::string reason;
};

struct ExecutionResult {
  // Accepted (perturbed layout, record) pairs in plan order.
  std::vector<std::pair<BinaryLayout, DefectRecord>> accepted;
  std::vector<SkipEntry> skipped;  // plan order; never silently dropped
};

// Runs every job (in parallel when OpenMP is enabled) and merges results in
// plan order, so output is invariant to thread count.  sampling-exhausted
// jobs land in `skipped`; any other error propagates.
ExecutionResult execute_plan(const std::vector<LibraryEntry>& library,
                             const DatasetPlan& plan);

// Line-delimited JSON records file; the first line is a format header.
void write_records(const std::filesystem::path& path,
                   const std::vector<DefectRecord>& records);
std::vector<DefectRecord> read_records(const std::filesystem::path& path);

}  // namespace litho
