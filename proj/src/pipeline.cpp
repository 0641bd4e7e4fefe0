#include "litho/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "litho/digest.hpp"
#include "litho/errors.hpp"
#include "litho/io.hpp"
#include "litho/rng.hpp"
#include "litho/stats.hpp"

namespace litho {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void require_known_keys(const json& obj, std::initializer_list<const char*> keys,
                        const std::string& scope) {
  if (!obj.is_object())
    throw Error("cli", "config-error", "'" + scope + "' must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw Error("cli", "config-error", "unknown config key '" + scope + it.key() + "'");
  }
}

template <typename T>
void read_key(const json& obj, const char* key, T& out, const std::string& scope) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error("cli", "config-error",
                "bad value for '" + scope + key + "': " + e.what());
  }
}

json config_to_json(const PipelineConfig& cfg) {
  json j;
  j["format_version"] = 1;
  j["master_seed"] = cfg.master_seed;
  j["out_dir"] = cfg.out_dir;
  j["library"] = {{"composite_count", cfg.library.composite_count},
                  {"horizontal_count", cfg.library.horizontal_count},
                  {"vertical_count", cfg.library.vertical_count},
                  {"grid", cfg.library.grid}};
  j["defects"] = {{"bridge_square_count", cfg.plan.bridge_square_count},
                  {"pinch_square_count", cfg.plan.pinch_square_count},
                  {"pinch_diamond_count", cfg.plan.pinch_diamond_count},
                  {"se_scale_min", cfg.plan.sampler.se_scale_min},
                  {"se_scale_max", cfg.plan.sampler.se_scale_max},
                  {"max_attempts", cfg.plan.sampler.max_attempts},
                  {"mode", to_string(cfg.plan.sampler.mode)},
                  {"window_margin", cfg.plan.sampler.window_margin},
                  {"min_irregularity", cfg.plan.sampler.classify.min_irregularity},
                  {"min_burr_area", cfg.plan.sampler.classify.min_burr_area},
                  {"meef", cfg.plan.sampler.epe.meef}};
  j["render"] = {{"output_size", cfg.render.output_size},
                 {"scale", cfg.render.scale},
                 {"psf_sigma", cfg.render.psf_sigma},
                 {"resist_threshold", cfg.render.resist_threshold},
                 {"noise_sigma", cfg.render.noise_sigma}};
  j["annotate"] = {{"min_area", cfg.annotate.min_area}};
  j["splits"] = {{"train", cfg.ratios.train}, {"val", cfg.ratios.val},
                 {"test", cfg.ratios.test}};
  j["stats"] = {{"grid_dim", cfg.stats.grid_dim},
                {"bins", cfg.stats.bins},
                {"min_pct", cfg.stats.min_pct},
                {"max_pct", cfg.stats.max_pct}};
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

GrayImage8 to_gray8(const RenderedImage& img) {
  GrayImage8 out{img.width, img.height, {}};
  out.bytes.resize(img.gray.size());
  for (std::size_t i = 0; i < img.gray.size(); ++i)
    out.bytes[i] = static_cast<std::uint8_t>(
        std::lround(std::clamp(img.gray[i], 0.0f, 1.0f) * 255.0f));
  return out;
}

}  // namespace

PipelineConfig load_pipeline_config(const fs::path& path) {
  json root = json::parse(read_text_file(path), nullptr, false);
  if (root.is_discarded())
    throw Error("cli", "config-error", "unparseable JSON in " + path.string());
  PipelineConfig cfg;
  require_known_keys(root,
                     {"format_version", "master_seed", "out_dir", "library", "defects",
                      "render", "annotate", "splits", "stats"},
                     "");
  int version = 1;
  read_key(root, "format_version", version, "");
  if (version != 1)
    throw Error("cli", "config-error", "unsupported config format_version");
  read_key(root, "master_seed", cfg.master_seed, "");
  read_key(root, "out_dir", cfg.out_dir, "");
  if (root.contains("library")) {
    const json& j = root["library"];
    require_known_keys(
        j, {"composite_count", "horizontal_count", "vertical_count", "grid"}, "library.");
    read_key(j, "composite_count", cfg.library.composite_count, "library.");
    read_key(j, "horizontal_count", cfg.library.horizontal_count, "library.");
    read_key(j, "vertical_count", cfg.library.vertical_count, "library.");
    read_key(j, "grid", cfg.library.grid, "library.");
  }
  if (root.contains("defects")) {
    const json& j = root["defects"];
    require_known_keys(j,
                       {"bridge_square_count", "pinch_square_count", "pinch_diamond_count",
                        "se_scale_min", "se_scale_max", "max_attempts", "mode",
                        "window_margin", "min_irregularity", "min_burr_area", "meef"},
                       "defects.");
    read_key(j, "bridge_square_count", cfg.plan.bridge_square_count, "defects.");
    read_key(j, "pinch_square_count", cfg.plan.pinch_square_count, "defects.");
    read_key(j, "pinch_diamond_count", cfg.plan.pinch_diamond_count, "defects.");
    read_key(j, "se_scale_min", cfg.plan.sampler.se_scale_min, "defects.");
    read_key(j, "se_scale_max", cfg.plan.sampler.se_scale_max, "defects.");
    read_key(j, "max_attempts", cfg.plan.sampler.max_attempts, "defects.");
    std::string mode = to_string(cfg.plan.sampler.mode);
    read_key(j, "mode", mode, "defects.");
    if (mode == "footprint")
      cfg.plan.sampler.mode = PerturbMode::footprint;
    else if (mode == "windowed")
      cfg.plan.sampler.mode = PerturbMode::windowed;
    else
      throw Error("cli", "config-error", "defects.mode must be footprint or windowed");
    read_key(j, "window_margin", cfg.plan.sampler.window_margin, "defects.");
    read_key(j, "min_irregularity", cfg.plan.sampler.classify.min_irregularity, "defects.");
    read_key(j, "min_burr_area", cfg.plan.sampler.classify.min_burr_area, "defects.");
    read_key(j, "meef", cfg.plan.sampler.epe.meef, "defects.");
  }
  if (root.contains("render")) {
    const json& j = root["render"];
    require_known_keys(
        j, {"output_size", "scale", "psf_sigma", "resist_threshold", "noise_sigma"},
        "render.");
    read_key(j, "output_size", cfg.render.output_size, "render.");
    read_key(j, "scale", cfg.render.scale, "render.");
    read_key(j, "psf_sigma", cfg.render.psf_sigma, "render.");
    read_key(j, "resist_threshold", cfg.render.resist_threshold, "render.");
    read_key(j, "noise_sigma", cfg.render.noise_sigma, "render.");
  }
  if (root.contains("annotate")) {
    const json& j = root["annotate"];
    require_known_keys(j, {"min_area"}, "annotate.");
    read_key(j, "min_area", cfg.annotate.min_area, "annotate.");
  }
  if (root.contains("splits")) {
    const json& j = root["splits"];
    require_known_keys(j, {"train", "val", "test"}, "splits.");
    read_key(j, "train", cfg.ratios.train, "splits.");
    read_key(j, "val", cfg.ratios.val, "splits.");
    read_key(j, "test", cfg.ratios.test, "splits.");
  }
  if (root.contains("stats")) {
    const json& j = root["stats"];
    require_known_keys(j, {"grid_dim", "bins", "min_pct", "max_pct"}, "stats.");
    read_key(j, "grid_dim", cfg.stats.grid_dim, "stats.");
    read_key(j, "bins", cfg.stats.bins, "stats.");
    read_key(j, "min_pct", cfg.stats.min_pct, "stats.");
    read_key(j, "max_pct", cfg.stats.max_pct, "stats.");
  }
  return cfg;
}

void save_pipeline_config(const fs::path& path, const PipelineConfig& cfg) {
  write_text_file(path, config_to_json(cfg).dump(2) + "\n");
}

std::string pipeline_config_hash(const PipelineConfig& cfg) {
  return sha256_hex(config_to_json(cfg).dump());
}

GenerateSummary run_generate(const PipelineConfig& cfg_in, const GenerateOptions& opts) {
  PipelineConfig cfg = cfg_in;
  if (opts.seed_overridden) cfg.master_seed = opts.seed_override;
  if (!opts.out_dir_override.empty()) cfg.out_dir = opts.out_dir_override;
#ifdef _OPENMP
  if (opts.workers > 0) omp_set_num_threads(opts.workers);
#endif

  // Stage seeds derive from the master seed; nothing depends on wall clock,
  // locale, or thread scheduling.
  cfg.library.master_seed = SeedMixer(cfg.master_seed).absorb("library").finish();
  cfg.plan.master_seed = SeedMixer(cfg.master_seed).absorb("plan").finish();
  const std::uint64_t split_seed = SeedMixer(cfg.master_seed).absorb("split").finish();
  const std::uint64_t noise_root = SeedMixer(cfg.master_seed).absorb("noise").finish();

  const fs::path out(cfg.out_dir);
  fs::create_directories(out / "layouts");
  fs::create_directories(out / "images");
  fs::create_directories(out / "masks");
  fs::create_directories(out / "stats");

  GenerateSummary summary;
  summary.out_dir = cfg.out_dir;
  summary.config_hash = pipeline_config_hash(cfg);
  for (const Split s : kSplits) summary.images_per_split[to_string(s)] = 0;
  for (const Category& c : kCategories) summary.annotations_per_class[c.name] = 0;

  // Base-layout library plus its manifest.
  const std::vector<LibraryEntry> library = build_library(cfg.library);
  summary.layouts = static_cast<int>(library.size());
  {
    json manifest;
    manifest["format_version"] = 1;
    manifest["master_seed"] = cfg.master_seed;
    manifest["layouts"] = json::array();
    for (const LibraryEntry& entry : library) {
      write_mask_pgm(out / "layouts" / (entry.spec.id + ".pgm"), entry.layout);
      json e;
      e["id"] = entry.spec.id;
      e["kind"] = to_string(entry.spec.kind);
      e["line_width"] = entry.spec.line_width;
      e["pitch"] = entry.spec.pitch;
      e["offset"] = entry.spec.kind == LayoutKind::composite ? 0 : entry.spec.effective_offset();
      e["seed"] = entry.spec.seed;
      e["grid"] = entry.spec.grid;
      e["pixels_sha256"] = sha256_hex(entry.layout.pixels);
      manifest["layouts"].push_back(std::move(e));
    }
    write_text_file(out / "library_manifest.json", manifest.dump(2) + "\n");
  }

  // Defect plan and execution.
  const DatasetPlan plan = generate_plan(library, cfg.plan);
  summary.jobs = static_cast<int>(plan.jobs.size());
  ExecutionResult exec = execute_plan(library, plan);
  summary.accepted = static_cast<int>(exec.accepted.size());
  summary.skipped = static_cast<int>(exec.skipped.size());
  {
    std::vector<DefectRecord> records;
    records.reserve(exec.accepted.size());
    for (const auto& [layout, record] : exec.accepted) records.push_back(record);
    write_records(out / "records.jsonl", records);
  }

  // Design-exclusive split assignment (defect images + one raw per layout).
  std::map<std::string, int> defects_per_layout;
  for (const auto& [layout, record] : exec.accepted) ++defects_per_layout[record.base_layout_id];
  std::vector<SplitItem> items;
  items.reserve(library.size());
  for (const LibraryEntry& entry : library)
    items.push_back(SplitItem{entry.spec.id, defects_per_layout[entry.spec.id] + 1});
  const std::map<std::string, Split> split_of = split_dataset(items, cfg.ratios, split_seed);

  // Render, measure, annotate.
  DatasetManifest manifest;
  manifest.ratios = cfg.ratios;
  std::ostringstream epe_csv;
  epe_csv << "# format_version=1\n";
  epe_csv << "defect_id,base_layout_id,group,scale_r,delta_b_max,predicted_epe_max,"
             "measured_epe\n";
  std::vector<double> corr_db, corr_epe;
  json excluded = json::array();
  int next_annotation_id = 1;
  std::size_t cursor = 0;

  auto add_image = [&](const std::string& id, const std::string& base_layout_id,
                       const RenderedImage& img) {
    ManifestImage mi;
    mi.id = id;
    mi.file_name = "images/" + id + ".pgm";
    mi.width = img.width;
    mi.height = img.height;
    mi.base_layout_id = base_layout_id;
    mi.split = split_of.at(base_layout_id);
    manifest.images.push_back(mi);
    ++summary.images_per_split[to_string(mi.split)];
    write_pgm(out / "images" / (id + ".pgm"), to_gray8(img));
    write_mask_pbm(out / "masks" / (id + ".pbm"), img.binary);
  };

  for (const LibraryEntry& entry : library) {
    const std::string raw_id = entry.spec.id + "-raw";
    const RenderedImage braw =
        render(entry.layout, cfg.render,
               SeedMixer(noise_root).absorb(raw_id).finish(), entry.spec.id);
    add_image(raw_id, entry.spec.id, braw);

    while (cursor < exec.accepted.size() &&
           exec.accepted[cursor].second.base_layout_id == entry.spec.id) {
      const auto& [aprime, record] = exec.accepted[cursor];
      ++cursor;
      const RenderedImage bdef =
          render(aprime, cfg.render, SeedMixer(noise_root).absorb(record.id).finish(),
                 record.id);

      double measured = std::numeric_limits<double>::quiet_NaN();
      try {
        measured = measure_epe(
            braw.binary, bdef.binary,
            perturb_window(record.spec, entry.layout.width, entry.layout.height),
            cfg.render);
      } catch (const Error& e) {
        if (e.code() != "window-empty") throw;
      }
      epe_csv << record.id << "," << record.base_layout_id << "," << to_string(record.group)
              << "," << record.spec.se.scale_r << "," << format_double(record.delta_b_max)
              << "," << format_double(record.predicted_epe_max) << ","
              << format_double(measured) << "\n";
      if (!std::isnan(measured)) {
        corr_db.push_back(record.delta_b_max);
        corr_epe.push_back(std::abs(measured));
        ++summary.epe_measured;
      }

      const BinaryLayout diff = diff_mask(braw.binary, bdef.binary);
      ExtractResult extraction;
      try {
        extraction = extract_instances(diff, record, record.id, cfg.annotate);
      } catch (const Error& e) {
        if (e.code() != "empty-annotation") throw;
        excluded.push_back({{"image_id", record.id}, {"reason", e.what()}});
        ++summary.excluded_pairs;
        continue;
      }
      summary.discarded_components += extraction.discarded;
      add_image(record.id, record.base_layout_id, bdef);
      for (const AnnotationInstance& inst : extraction.instances) {
        ManifestAnnotation ann;
        ann.id = next_annotation_id++;
        ann.image_id = inst.image_id;
        ann.category_id = category_id_of(inst.cls);
        ann.segmentation = inst.rle;
        ann.bbox_x = inst.bbox_x;
        ann.bbox_y = inst.bbox_y;
        ann.bbox_w = inst.bbox_w;
        ann.bbox_h = inst.bbox_h;
        ann.area = inst.area;
        manifest.annotations.push_back(std::move(ann));
        ++summary.annotations_per_class[to_string(inst.cls)];
      }
    }
  }

  export_coco(manifest, out);
  write_text_file(out / "epe_measurements.csv", epe_csv.str());

  const StatsReport stats = dataset_stats(manifest, Split::train, cfg.stats);
  write_density_csv(out / "stats" / "density_train.csv", stats, Split::train);
  write_size_hist_csv(out / "stats" / "size_hist_train.csv", stats, Split::train);

  summary.spearman_rho = corr_db.size() >= 2 ? spearman_rho(corr_db, corr_epe) : 0.0;

  {
    json skip_report;
    skip_report["format_version"] = 1;
    skip_report["sampling_skips"] = json::array();
    for (const SkipEntry& s : exec.skipped)
      skip_report["sampling_skips"].push_back({{"defect_id", s.defect_id},
                                               {"base_layout_id", s.base_layout_id},
                                               {"group", s.group},
                                               {"reason", s.reason}});
    skip_report["excluded_pairs"] = excluded;
    skip_report["discarded_components"] = summary.discarded_components;
    write_text_file(out / "skip_report.json", skip_report.dump(2) + "\n");
  }

  {
    json s;
    s["format_version"] = 1;
    s["config_hash"] = summary.config_hash;
    s["master_seed"] = cfg.master_seed;
    s["layouts"] = summary.layouts;
    s["defect_jobs"] = summary.jobs;
    s["accepted"] = summary.accepted;
    s["skipped"] = summary.skipped;
    s["excluded_pairs"] = summary.excluded_pairs;
    s["discarded_components"] = summary.discarded_components;
    s["images_per_split"] = summary.images_per_split;
    s["annotations_per_class"] = summary.annotations_per_class;
    s["total_images"] = manifest.images.size();
    s["total_annotations"] = manifest.annotations.size();
    s["epe_measured_pairs"] = summary.epe_measured;
    s["spearman_rho_delta_b_vs_epe"] = summary.spearman_rho;
    write_text_file(out / "summary.json", s.dump(2) + "\n");

    std::ostringstream txt;
    txt << "dataset generation summary\n";
    txt << "  layouts              " << summary.layouts << "\n";
    txt << "  defect jobs          " << summary.jobs << "\n";
    txt << "  accepted             " << summary.accepted << "\n";
    txt << "  skipped              " << summary.skipped << "\n";
    txt << "  excluded pairs       " << summary.excluded_pairs << "\n";
    txt << "  images               " << manifest.images.size();
    txt << " (train " << summary.images_per_split["train"] << " / val "
        << summary.images_per_split["val"] << " / test " << summary.images_per_split["test"]
        << ")\n";
    txt << "  annotations          " << manifest.annotations.size();
    txt << " (bridge " << summary.annotations_per_class["bridge"] << " / burr "
        << summary.annotations_per_class["burr"] << " / pinch "
        << summary.annotations_per_class["pinch"] << " / contamination "
        << summary.annotations_per_class["contamination"] << ")\n";
    txt << "  epe measured pairs   " << summary.epe_measured << "\n";
    txt << "  spearman rho         " << format_double(summary.spearman_rho) << "\n";
    txt << "  config hash          " << summary.config_hash << "\n";
    write_text_file(out / "summary.txt", txt.str());
  }

  save_pipeline_config(out / "config.json", cfg);  // effective, overrides applied
  return summary;
}

void run_stats(const fs::path& dataset_dir, Split split, const StatsConfig& cfg) {
  const fs::path gt =
      dataset_dir / "annotations" / ("instances_" + to_string(split) + ".json");
  const CocoFile coco = load_coco(gt);
  DatasetManifest manifest;
  manifest.images = coco.images;
  manifest.annotations = coco.annotations;
  const StatsReport report = dataset_stats(manifest, split, cfg);
  fs::create_directories(dataset_dir / "stats");
  write_density_csv(dataset_dir / "stats" / ("density_" + to_string(split) + ".csv"), report,
                    split);
  write_size_hist_csv(dataset_dir / "stats" / ("size_hist_" + to_string(split) + ".csv"),
                      report, split);
}

}  // namespace litho
