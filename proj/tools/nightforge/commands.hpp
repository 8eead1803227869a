#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace nightforge::cli {

/// Logs to stderr; stdout stays reserved for artifact paths.
void log(const std::string& message);

int cmd_scenegen(RunConfig& cfg, const std::filesystem::path& out_dir,
                 int frames_per_scenario_flag, int target_pool,
                 int frame_size);
int cmd_train_style(RunConfig& cfg, const std::filesystem::path& day_dir,
                    const std::filesystem::path& night_dir,
                    const std::filesystem::path& out_dir);
int cmd_translate(RunConfig& cfg, const std::filesystem::path& checkpoint,
                  const std::filesystem::path& images_dir,
                  const std::filesystem::path& out_dir);
int cmd_autolabel(RunConfig& cfg, const std::filesystem::path& day_dir,
                  const std::filesystem::path& translated_dir,
                  const std::filesystem::path& out_dir, double conf_threshold);
int cmd_assemble(RunConfig& cfg, const std::filesystem::path& real_images,
                 const std::filesystem::path& real_labels,
                 const std::filesystem::path& augmented_images,
                 const std::filesystem::path& augmented_labels,
                 const std::filesystem::path& translation_manifest,
                 const std::string& mix_flag,
                 const std::filesystem::path& out_dir);
int cmd_finetune(RunConfig& cfg, const std::filesystem::path& manifest_path,
                 const std::string& plan_flag,
                 const std::filesystem::path& out_dir);
int cmd_evaluate(RunConfig& cfg, const std::filesystem::path& preds_dir,
                 const std::filesystem::path& gts_dir,
                 const std::filesystem::path& out_dir);
int cmd_compare(RunConfig& cfg, const std::filesystem::path& baseline,
                const std::filesystem::path& candidate,
                const std::string& map_rows,
                const std::filesystem::path& out_dir);
int cmd_pipeline(RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace nightforge::cli
