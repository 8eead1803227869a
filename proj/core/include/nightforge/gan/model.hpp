#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>

#include "nightforge/gan/config.hpp"
#include "nightforge/gan/discriminator.hpp"
#include "nightforge/gan/generator.hpp"

namespace nightforge::gan {

/// The paired generators (day->night and night->day) with their patch
/// discriminators (one judging day images, one judging night images).
class TranslationModel {
 public:
  TranslationModel(const ModelConfig& cfg, std::uint64_t seed);

  Generator& day_to_night() { return day_to_night_; }
  Generator& night_to_day() { return night_to_day_; }
  const Generator& day_to_night() const { return day_to_night_; }
  const Generator& night_to_day() const { return night_to_day_; }
  PatchDiscriminator& day_discriminator() { return disc_day_; }
  PatchDiscriminator& night_discriminator() { return disc_night_; }

  std::vector<nn::NamedParam> generator_params();
  std::vector<nn::NamedParam> discriminator_params();

  const ModelConfig& config() const { return cfg_; }

 private:
  ModelConfig cfg_;
  Generator day_to_night_, night_to_day_;
  PatchDiscriminator disc_day_, disc_night_;
};

/// Persists all four networks plus a metadata file with the training and
/// model configuration and the epoch the checkpoint was taken at.
void save_checkpoint(const std::filesystem::path& dir, TranslationModel& model,
                     const TrainConfig& train_cfg, int epoch);

struct LoadedCheckpoint {
  ModelConfig model_cfg;
  TrainConfig train_cfg;
  int epoch = 0;
};

/// Reads metadata only (cheap); CheckpointedModel restores weights too.
LoadedCheckpoint read_checkpoint_metadata(const std::filesystem::path& dir);

/// Owning loader: restores a model and its configs from a checkpoint
/// directory.
class CheckpointedModel {
 public:
  explicit CheckpointedModel(const std::filesystem::path& dir);
  TranslationModel& model() { return *model_; }
  const LoadedCheckpoint& info() const { return info_; }

 private:
  LoadedCheckpoint info_;
  std::unique_ptr<TranslationModel> model_;
};

}  // namespace nightforge::gan
