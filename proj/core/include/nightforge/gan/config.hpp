#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace nightforge::gan {

/// Translation-model training hyperparameters. The constant-lr phase
/// runs n_epochs epochs and the linear decay a further n_epochs_decay.
struct TrainConfig {
  double lr0 = 0.0002;
  double beta1 = 0.5;
  int n_epochs = 100;
  int n_epochs_decay = 100;
  double lambda_cyc = 10.0;
  double lambda_id = 0.5;
  int batch_size = 1;
  std::uint64_t seed = 7;
  int checkpoint_every = 50;
  int fake_pool_size = 50;  // 0 disables the history pool
  bool random_flip = false;

  int total_epochs() const { return n_epochs + n_epochs_decay; }
};

/// Throws ConfigError when weights are negative, epoch counts are negative,
/// or batch size is non-positive.
void validate(const TrainConfig& cfg);

/// Piecewise-linear learning-rate schedule over 1-based epoch indices:
/// lr0 while t <= n_epochs, then a linear ramp to zero over n_epochs_decay
/// epochs, then zero. Continuous at the knee and non-increasing.
double lr_schedule(int epoch, const TrainConfig& cfg);

/// Generator architecture. attention_positions lists encoder depths
/// (0 = after the stem, 1..n after each downsample) where an attention
/// block is inserted; each position creates a mirrored decoder block that
/// consumes the encoder context, so pairings are symmetric by construction.
struct GeneratorConfig {
  int input_size = 256;
  int base_channels = 64;
  int n_residual_blocks = 9;
  std::vector<int> attention_positions = {2};
};

void validate(const GeneratorConfig& cfg);

/// Full translation model: two generators plus two patch discriminators.
struct ModelConfig {
  GeneratorConfig generator;
  int disc_base_channels = 64;
  int disc_layers = 3;
};

void validate(const ModelConfig& cfg);

TrainConfig train_config_from_json_file(const std::filesystem::path& path);

}  // namespace nightforge::gan
