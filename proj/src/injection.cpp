#include "litho/injection.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "litho/errors.hpp"
#include "litho/rng.hpp"

namespace litho {

namespace {

using nlohmann::json;

std::string job_defect_id(const std::string& layout_id, DefectGroup group, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", index);
  return layout_id + "-" + group_tag(group) + "-" + buf;
}

StructuringElement element_for(DefectGroup group, int r) {
  return group_shape(group) == SeShape::square ? StructuringElement::make_square(r)
                                               : StructuringElement::make_diamond(r);
}

json record_to_json(const DefectRecord& rec) {
  if (rec.spec.se.shape == SeShape::custom)
    throw Error("injection", "invalid-record", "custom elements are not serializable");
  json j;
  j["id"] = rec.id;
  j["base_layout_id"] = rec.base_layout_id;
  j["group"] = to_string(rec.group);
  j["sigma"] = sigma_of(rec.spec.kind);
  j["se_shape"] = to_string(rec.spec.se.shape);
  j["scale_r"] = rec.spec.se.scale_r;
  j["tx"] = rec.spec.tx;
  j["ty"] = rec.spec.ty;
  j["mode"] = to_string(rec.spec.mode);
  j["window_margin"] = rec.spec.window_margin;
  j["delta_k"] = rec.delta_k;
  j["class"] = to_string(rec.cls);
  j["delta_b_max"] = rec.delta_b_max;
  j["predicted_epe_max"] = rec.predicted_epe_max;
  j["seed"] = rec.seed;
  return j;
}

DefectRecord record_from_json(const json& j) {
  DefectRecord rec;
  rec.id = j.at("id").get<std::string>();
  rec.base_layout_id = j.at("base_layout_id").get<std::string>();
  rec.group = defect_group_from_string(j.at("group").get<std::string>());
  const int sigma = j.at("sigma").get<int>();
  rec.spec.kind = sigma < 0 ? PerturbKind::erosion : PerturbKind::dilation;
  const std::string shape = j.at("se_shape").get<std::string>();
  const int r = j.at("scale_r").get<int>();
  if (shape == "square")
    rec.spec.se = StructuringElement::make_square(r);
  else if (shape == "diamond")
    rec.spec.se = StructuringElement::make_diamond(r);
  else
    throw Error("injection", "invalid-record", "unsupported element shape '" + shape + "'");
  rec.spec.tx = j.at("tx").get<int>();
  rec.spec.ty = j.at("ty").get<int>();
  rec.spec.mode =
      j.at("mode").get<std::string>() == "windowed" ? PerturbMode::windowed
                                                    : PerturbMode::footprint;
  rec.spec.window_margin = j.at("window_margin").get<int>();
  rec.delta_k = j.at("delta_k").get<int>();
  rec.cls = defect_class_from_string(j.at("class").get<std::string>());
  rec.delta_b_max = j.at("delta_b_max").get<double>();
  rec.predicted_epe_max = j.at("predicted_epe_max").get<double>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  return rec;
}

}  // namespace

std::string to_string(DefectGroup group) {
  switch (group) {
    case DefectGroup::bridge_square: return "bridge-square";
    case DefectGroup::pinch_square: return "pinch-square";
    case DefectGroup::pinch_diamond: return "pinch-diamond";
  }
  return "bridge-square";
}

DefectGroup defect_group_from_string(const std::string& name) {
  if (name == "bridge-square") return DefectGroup::bridge_square;
  if (name == "pinch-square") return DefectGroup::pinch_square;
  if (name == "pinch-diamond") return DefectGroup::pinch_diamond;
  throw Error("injection", "invalid-record", "no defect group named '" + name + "'");
}

std::string group_tag(DefectGroup group) {
  switch (group) {
    case DefectGroup::bridge_square: return "bsq";
    case DefectGroup::pinch_square: return "psq";
    case DefectGroup::pinch_diamond: return "pdi";
  }
  return "bsq";
}

DefectClass target_class(DefectGroup group) {
  return group == DefectGroup::bridge_square ? DefectClass::bridge : DefectClass::pinch;
}

PerturbKind group_kind(DefectGroup group) {
  return group == DefectGroup::bridge_square ? PerturbKind::dilation : PerturbKind::erosion;
}

SeShape group_shape(DefectGroup group) {
  return group == DefectGroup::pinch_diamond ? SeShape::diamond : SeShape::square;
}

int PlanConfig::count_of(DefectGroup group) const {
  switch (group) {
    case DefectGroup::bridge_square: return bridge_square_count;
    case DefectGroup::pinch_square: return pinch_square_count;
    case DefectGroup::pinch_diamond: return pinch_diamond_count;
  }
  return 0;
}

std::pair<BinaryLayout, DefectRecord> sample_defect(const BinaryLayout& a, DefectGroup group,
                                                    std::uint64_t seed,
                                                    const SamplerConfig& cfg) {
  if (cfg.se_scale_min < 0 || cfg.se_scale_max < cfg.se_scale_min)
    throw Error("injection", "invalid-config", "bad element scale range");
  Rng rng(seed);
  const DefectClass target = target_class(group);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    PerturbationSpec spec;
    spec.kind = group_kind(group);
    spec.tx = rng.uniform_int(0, a.width - 1);
    spec.ty = rng.uniform_int(0, a.height - 1);
    spec.se = element_for(group, rng.uniform_int(cfg.se_scale_min, cfg.se_scale_max));
    spec.mode = cfg.mode;
    spec.window_margin = cfg.window_margin;
    const BinaryLayout perturbed = perturb(a, spec);
    if (classify(a, perturbed, spec, cfg.classify) != target) continue;
    DefectRecord rec;
    rec.group = group;
    rec.spec = spec;
    rec.delta_k = delta_k(a, perturbed);
    rec.cls = target;
    rec.delta_b_max = max_boundary_displacement(spec.se, spec.kind);
    rec.predicted_epe_max = predicted_epe(cfg.epe, rec.delta_b_max);
    rec.seed = seed;
    return {perturbed, rec};
  }
  throw Error("injection", "sampling-exhausted",
              "no " + to_string(target_class(group)) + " found in " +
                  std::to_string(cfg.max_attempts) + " attempts");
}

DatasetPlan generate_plan(const std::vector<LibraryEntry>& library, const PlanConfig& plan) {
  DatasetPlan out;
  out.sampler = plan.sampler;
  constexpr DefectGroup kGroups[] = {DefectGroup::bridge_square, DefectGroup::pinch_square,
                                     DefectGroup::pinch_diamond};
  for (const LibraryEntry& entry : library) {
    for (DefectGroup group : kGroups) {
      const int count = plan.count_of(group);
      for (int index = 0; index < count; ++index) {
        DefectJob job;
        job.defect_id = job_defect_id(entry.spec.id, group, index);
        job.base_layout_id = entry.spec.id;
        job.group = group;
        job.index = index;
        job.seed = SeedMixer(plan.master_seed)
                       .absorb(std::string_view(entry.spec.id))
                       .absorb(std::string_view(to_string(group)))
                       .absorb(static_cast<std::uint64_t>(index))
                       .finish();
        out.jobs.push_back(std::move(job));
      }
    }
  }
  return out;
}

ExecutionResult execute_plan(const std::vector<LibraryEntry>& library,
                             const DatasetPlan& plan) {
  // Layouts indexed by id for O(1) job lookup.
  std::vector<const LibraryEntry*> by_job(plan.jobs.size(), nullptr);
  for (std::size_t i = 0; i < plan.jobs.size(); ++i) {
    for (const LibraryEntry& entry : library)
      if (entry.spec.id == plan.jobs[i].base_layout_id) {
        by_job[i] = &entry;
        break;
      }
    if (!by_job[i])
      throw Error("injection", "unknown-layout",
                  "plan references layout '" + plan.jobs[i].base_layout_id + "'");
  }

  const std::int64_t n = static_cast<std::int64_t>(plan.jobs.size());
  std::vector<std::optional<std::pair<BinaryLayout, DefectRecord>>> slots(plan.jobs.size());
  std::vector<std::string> failures(plan.jobs.size());  // sampling-exhausted reasons
  std::exception_ptr first_error;

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const DefectJob& job = plan.jobs[i];
    try {
      auto result = sample_defect(by_job[i]->layout, job.group, job.seed, plan.sampler);
      result.second.id = job.defect_id;
      result.second.base_layout_id = job.base_layout_id;
      slots[i] = std::move(result);
    } catch (const Error& e) {
      if (e.code() == "sampling-exhausted") {
        failures[i] = e.what();
      } else {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  ExecutionResult out;
  out.accepted.reserve(plan.jobs.size());
  for (std::size_t i = 0; i < plan.jobs.size(); ++i) {
    if (slots[i]) {
      out.accepted.push_back(std::move(*slots[i]));
    } else {
      out.skipped.push_back(SkipEntry{plan.jobs[i].defect_id, plan.jobs[i].base_layout_id,
                                      to_string(plan.jobs[i].group), failures[i]});
    }
  }
  return out;
}

void write_records(const std::filesystem::path& path,
                   const std::vector<DefectRecord>& records) {
  std::ostringstream out;
  json meta;
  meta["format"] = "defect-records";
  meta["version"] = 1;
  meta["count"] = records.size();
  out << meta.dump() << "\n";
  for (const DefectRecord& rec : records) out << record_to_json(rec).dump() << "\n";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("injection", "io-error", "cannot open " + path.string());
  file << out.str();
  if (!file) throw Error("injection", "io-error", "write failed for " + path.string());
}

std::vector<DefectRecord> read_records(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("injection", "io-error", "cannot open " + path.string());
  std::string line;
  if (!std::getline(file, line))
    throw Error("injection", "invalid-record", "empty records file " + path.string());
  json meta = json::parse(line, nullptr, false);
  if (meta.is_discarded() || meta.value("format", "") != "defect-records" ||
      meta.value("version", 0) != 1)
    throw Error("injection", "invalid-record", "unrecognized records header in " + path.string());
  std::vector<DefectRecord> records;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw Error("injection", "invalid-record", "malformed record line in " + path.string());
    records.push_back(record_from_json(j));
  }
  return records;
}

}  // namespace litho
