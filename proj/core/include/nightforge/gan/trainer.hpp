#pragma once

#include <filesystem>
#include <vector>

#include "nightforge/gan/config.hpp"

namespace nightforge::gan {

/// Mean of each objective term over one epoch. Mirrors the loss-log CSV
/// columns.
struct EpochStats {
  int epoch = 0;
  double lr = 0.0;
  double loss_g_gan = 0.0;
  double loss_f_gan = 0.0;
  double loss_d_x = 0.0;
  double loss_d_y = 0.0;
  double loss_cyc = 0.0;
  double loss_id = 0.0;
  double loss_total = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
  std::filesystem::path final_checkpoint;
  std::filesystem::path loss_log;
};

/// Trains the translation model on two unpaired image directories.
/// Deterministic for a fixed seed: data order, weight init, and pool
/// sampling all derive from cfg.seed. Aborts with TrainingDivergedError
/// (naming the term) when any loss becomes non-finite.
///
/// Writes out_dir/loss_log.csv plus checkpoints/epoch_NNNN/ every
/// cfg.checkpoint_every epochs and checkpoints/latest/ at the end.
TrainResult train(const TrainConfig& cfg, const ModelConfig& model_cfg,
                  const std::filesystem::path& domain_day_dir,
                  const std::filesystem::path& domain_night_dir,
                  const std::filesystem::path& out_dir);

}  // namespace nightforge::gan
