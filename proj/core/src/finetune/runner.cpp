#include "nightforge/finetune/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/annotation_io.hpp"
#include "nightforge/core/errors.hpp"
#include "nightforge/eval/metrics.hpp"

namespace nightforge::finetune {

std::optional<double> score_split(autolabel::DetectorAdapter& adapter,
                                  const dataset::DatasetManifest& manifest,
                                  const std::string& split) {
  const auto* entries = manifest.split(split);
  if (!entries || entries->empty()) return std::nullopt;

  std::vector<eval::ImageSample> samples;
  for (const auto& entry : *entries) {
    eval::ImageSample sample;
    ImageRecord record;
    record.path = manifest.resolve(entry.image);
    record.width_px = 1;  // detection mocks key off the stem; metrics are
    record.height_px = 1;  // computed in normalized coordinates
    record.domain = entry.domain;
    if (entry.source) record.source_of = entry.source;
    for (const auto& det : adapter.detect(record)) {
      sample.predictions.push_back({det.class_id, det.confidence, det.box});
    }
    const auto label_path = manifest.resolve(entry.label);
    if (std::filesystem::exists(label_path)) {
      sample.ground_truth = load_annotation_file(label_path, {1, 1});
    }
    samples.push_back(std::move(sample));
  }
  const auto table = eval::map_summary(samples, manifest.classes);
  return table.all.map50;
}

FinetuneResult run(autolabel::DetectorAdapter& adapter,
                   const dataset::DatasetManifest& manifest,
                   const StagePlan& plan, const std::filesystem::path& out_dir) {
  validate(plan, adapter.list_blocks());
  std::filesystem::create_directories(out_dir);

  std::ofstream log(out_dir / "stage_log.csv", std::ios::binary);
  if (!log) throw IoError("cannot write stage log in " + out_dir.string());
  log << "stage,lr,epochs,wall_time,val_mAP50\n";

  FinetuneResult result;
  double best_score = -1.0;
  for (size_t i = 0; i < plan.stages.size(); ++i) {
    const Stage& stage = plan.stages[i];
    adapter.set_trainable(stage.trainable);
    const auto started = std::chrono::steady_clock::now();
    try {
      adapter.fit(manifest, stage.lr, stage.epochs);
    } catch (const std::exception& e) {
      std::ofstream marker(out_dir / "FAILED");
      marker << "stage " << (i + 1) << " (" << stage.name << "): " << e.what()
             << "\n";
      throw;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    StageLogRow row;
    row.stage = static_cast<int>(i + 1);
    row.lr = stage.lr;
    row.epochs = stage.epochs;
    row.wall_time_s = wall;
    row.val_map50 = score_split(adapter, manifest, "val");

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%d,%.3f,%s\n", row.stage, row.lr,
                  row.epochs, row.wall_time_s,
                  row.val_map50 ? std::to_string(*row.val_map50).c_str() : "-");
    log << buf;
    log.flush();

    const auto stage_artifact =
        out_dir / ("model_stage_" + std::to_string(i + 1) + ".json");
    adapter.save(stage_artifact);
    if (row.val_map50.value_or(0.0) > best_score) {
      best_score = row.val_map50.value_or(0.0);
      result.best_stage = row.stage;
      result.best_artifact = out_dir / "model_best.json";
      std::filesystem::copy_file(
          stage_artifact, result.best_artifact,
          std::filesystem::copy_options::overwrite_existing);
    }
    result.stage_log.push_back(row);
  }

  result.final_artifact = out_dir / "model_final.json";
  adapter.save(result.final_artifact);

  nlohmann::json plan_json = nlohmann::json::parse(to_json_string(plan));
  nlohmann::json stage_rows = nlohmann::json::array();
  for (const auto& row : result.stage_log) {
    stage_rows.push_back(
        {{"stage", row.stage},
         {"lr", row.lr},
         {"epochs", row.epochs},
         {"wall_time_s", row.wall_time_s},
         {"val_map50",
          row.val_map50 ? nlohmann::json(*row.val_map50) : nlohmann::json()}});
  }
  nlohmann::json meta{{"schema_version", 1},
                      {"plan", plan_json},
                      {"stages", stage_rows},
                      {"best_stage", result.best_stage},
                      {"adapter", adapter.name()}};
  std::ofstream meta_out(out_dir / "finetune_metadata.json");
  if (!meta_out) throw IoError("cannot write finetune metadata");
  meta_out << meta.dump(2) << "\n";
  return result;
}

}  // namespace nightforge::finetune
