// Command-line front end: generate / stats / evaluate / render-one /
// inspect-record.  Exit codes: 0 ok, 2 configuration error, 3 pipeline error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "litho/errors.hpp"
#include "litho/eval.hpp"
#include "litho/io.hpp"
#include "litho/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;

struct Args {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::string seed_text;

  std::string dataset_dir;
  std::string split = "train";

  std::string gt_path;
  std::string pred_path;
  std::string report_path;
  double iou_thr = 0.5;
  double score_thr = 0.5;

  std::string layout_path;
  std::string out_prefix;
  std::uint64_t render_seed = 0;

  std::string records_path;
  std::string record_id;
  std::string layouts_dir;
};

int cmd_generate(const Args& args) {
  litho::PipelineConfig cfg;
  if (!args.config_path.empty()) cfg = litho::load_pipeline_config(args.config_path);
  litho::GenerateOptions opts;
  opts.out_dir_override = args.out_dir;
  opts.workers = args.workers;
  if (!args.seed_text.empty()) {
    opts.seed_overridden = true;
    opts.seed_override = std::stoull(args.seed_text);
  }
  const litho::GenerateSummary summary = litho::run_generate(cfg, opts);
  std::cout << litho::read_text_file(std::filesystem::path(summary.out_dir) / "summary.txt");
  return kExitOk;
}

int cmd_stats(const Args& args) {
  litho::run_stats(args.dataset_dir, litho::split_from_string(args.split),
                   litho::StatsConfig{});
  std::cout << "stats written to " << args.dataset_dir << "/stats for split '" << args.split
            << "'\n";
  return kExitOk;
}

int cmd_evaluate(const Args& args) {
  litho::EvalConfig cfg;
  cfg.iou_thr = args.iou_thr;
  cfg.score_thr = args.score_thr;
  const litho::EvalReport report = litho::evaluate_files(args.gt_path, args.pred_path, cfg);
  if (!args.report_path.empty()) litho::write_report_json(args.report_path, report);
  std::cout << litho::report_table(report);
  return kExitOk;
}

int cmd_render_one(const Args& args) {
  litho::RenderConfig render_cfg;
  if (!args.config_path.empty())
    render_cfg = litho::load_pipeline_config(args.config_path).render;
  const litho::BinaryLayout layout = litho::read_mask_pgm(args.layout_path);
  const litho::RenderedImage img =
      litho::render(layout, render_cfg, args.render_seed, args.layout_path);
  const std::filesystem::path gray_path(args.out_prefix + ".pgm");
  const std::filesystem::path mask_path(args.out_prefix + "_binary.pbm");
  litho::GrayImage8 gray{img.width, img.height, {}};
  gray.bytes.resize(img.gray.size());
  for (std::size_t i = 0; i < img.gray.size(); ++i)
    gray.bytes[i] = static_cast<std::uint8_t>(
        std::lround(std::clamp(img.gray[i], 0.0f, 1.0f) * 255.0f));
  litho::write_pgm(gray_path, gray);
  litho::write_mask_pbm(mask_path, img.binary);
  std::cout << "rendered " << args.layout_path << " -> " << gray_path.string() << ", "
            << mask_path.string() << " (config " << img.config_hash.substr(0, 12) << ")\n";
  return kExitOk;
}

int cmd_inspect_record(const Args& args) {
  const std::vector<litho::DefectRecord> records = litho::read_records(args.records_path);
  const litho::DefectRecord* found = nullptr;
  for (const litho::DefectRecord& rec : records)
    if (rec.id == args.record_id) {
      found = &rec;
      break;
    }
  if (!found)
    throw litho::Error("injection", "invalid-record",
                       "no record with id '" + args.record_id + "' in " + args.records_path);
  const litho::DefectRecord& rec = *found;
  std::cout << "id                " << rec.id << "\n";
  std::cout << "base layout       " << rec.base_layout_id << "\n";
  std::cout << "group             " << litho::to_string(rec.group) << "\n";
  std::cout << "class             " << litho::to_string(rec.cls) << "\n";
  std::cout << "sigma             " << litho::sigma_of(rec.spec.kind) << "\n";
  std::cout << "element           " << litho::to_string(rec.spec.se.shape) << " r="
            << rec.spec.se.scale_r << "\n";
  std::cout << "target            (" << rec.spec.tx << ", " << rec.spec.ty << ")\n";
  std::cout << "mode              " << litho::to_string(rec.spec.mode) << "\n";
  std::cout << "delta_k           " << rec.delta_k << "\n";
  std::cout << "delta_b_max       " << rec.delta_b_max << "\n";
  std::cout << "predicted_epe_max " << rec.predicted_epe_max << "\n";
  std::cout << "seed              " << rec.seed << "\n";
  if (!args.layouts_dir.empty()) {
    const litho::BinaryLayout base = litho::read_mask_pgm(
        std::filesystem::path(args.layouts_dir) / (rec.base_layout_id + ".pgm"));
    const litho::BinaryLayout perturbed = litho::perturb(base, rec.spec);
    const int dk = litho::delta_k(base, perturbed);
    const litho::DefectClass cls =
        litho::classify(base, perturbed, rec.spec, litho::ClassifyConfig{});
    const bool ok = dk == rec.delta_k && cls == rec.cls;
    std::cout << "re-verification   " << (ok ? "ok" : "MISMATCH") << " (delta_k " << dk
              << ", class " << litho::to_string(cls) << ")\n";
    if (!ok) return kExitPipeline;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic lithographic defect dataset toolkit"};
  app.require_subcommand(1);
  Args args;

  CLI::App* generate = app.add_subcommand("generate", "Run the full dataset pipeline");
  generate->add_option("--config", args.config_path, "Pipeline config JSON (defaults apply)");
  generate->add_option("--out", args.out_dir, "Output directory override");
  generate->add_option("--workers", args.workers, "Worker thread count (0 = default)");
  generate->add_option("--seed", args.seed_text, "Master seed override");

  CLI::App* stats = app.add_subcommand("stats", "Recompute dataset statistics CSVs");
  stats->add_option("--dataset", args.dataset_dir, "Dataset directory")->required();
  stats->add_option("--split", args.split, "Split name (train/val/test)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score detections against ground truth");
  evaluate->add_option("--gt", args.gt_path, "Ground-truth instances JSON")->required();
  evaluate->add_option("--pred", args.pred_path, "Predictions JSON array")->required();
  evaluate->add_option("--out", args.report_path, "Report JSON output path");
  evaluate->add_option("--iou-thr", args.iou_thr, "IoU match threshold");
  evaluate->add_option("--score-thr", args.score_thr, "Score threshold for TP/FP/FN counts");

  CLI::App* render_one = app.add_subcommand("render-one", "Render a single layout PGM");
  render_one->add_option("--layout", args.layout_path, "Layout mask PGM")->required();
  render_one->add_option("--out", args.out_prefix, "Output path prefix")->required();
  render_one->add_option("--config", args.config_path, "Pipeline config JSON (render section)");
  render_one->add_option("--seed", args.render_seed, "Noise seed");

  CLI::App* inspect = app.add_subcommand("inspect-record", "Show one defect record");
  inspect->add_option("--records", args.records_path, "records.jsonl path")->required();
  inspect->add_option("--id", args.record_id, "Defect record id")->required();
  inspect->add_option("--layouts", args.layouts_dir,
                      "Layout directory for provenance re-verification");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(args);
    if (stats->parsed()) return cmd_stats(args);
    if (evaluate->parsed()) return cmd_evaluate(args);
    if (render_one->parsed()) return cmd_render_one(args);
    if (inspect->parsed()) return cmd_inspect_record(args);
  } catch (const litho::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.module_name() == "cli" ? kExitConfig : kExitPipeline;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitOk;
}
