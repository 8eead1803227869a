#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "nightforge/autolabel/detector.hpp"
#include "nightforge/dataset/manifest.hpp"
#include "nightforge/finetune/stage_plan.hpp"

namespace nightforge::finetune {

struct StageLogRow {
  int stage = 0;  // 1-based
  double lr = 0.0;
  int epochs = 0;
  double wall_time_s = 0.0;
  std::optional<double> val_map50;
};

struct FinetuneResult {
  std::vector<StageLogRow> stage_log;
  std::filesystem::path final_artifact;
  std::filesystem::path best_artifact;
  int best_stage = 0;  // 1-based, by validation mAP50
};

/// Runs the staged fine-tune: for each stage, set_trainable with exactly
/// that stage's trainable set, fit on the train split, then score the val
/// split (mAP50) through the evaluator. Artifacts land in out_dir
/// (model_stage_N, model_final, model_best) with the plan embedded in
/// finetune_metadata.json and the log in stage_log.csv.
///
/// A fit failure writes a FAILED marker (keeping partial artifacts) and
/// rethrows.
FinetuneResult run(autolabel::DetectorAdapter& adapter,
                   const dataset::DatasetManifest& manifest,
                   const StagePlan& plan, const std::filesystem::path& out_dir);

/// Scores an adapter's detections against one manifest split (all-class
/// mAP50). nullopt when the split defines no metric.
std::optional<double> score_split(autolabel::DetectorAdapter& adapter,
                                  const dataset::DatasetManifest& manifest,
                                  const std::string& split);

}  // namespace nightforge::finetune
