#include "nightforge/gan/config.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge::gan {

void validate(const TrainConfig& cfg) {
  if (cfg.lr0 <= 0.0) throw ConfigError("lr0 must be positive");
  if (cfg.beta1 < 0.0 || cfg.beta1 >= 1.0) throw ConfigError("beta1 must be in [0,1)");
  if (cfg.n_epochs < 0 || cfg.n_epochs_decay < 0) {
    throw ConfigError("epoch counts must be non-negative");
  }
  if (cfg.lambda_cyc < 0.0 || cfg.lambda_id < 0.0) {
    throw ConfigError("loss weights must be non-negative");
  }
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be positive");
  if (cfg.checkpoint_every < 1) throw ConfigError("checkpoint_every must be positive");
  if (cfg.fake_pool_size < 0) throw ConfigError("fake_pool_size must be non-negative");
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
  if (epoch < 1) throw ConfigError("epoch index is 1-based");
  if (epoch <= cfg.n_epochs) return cfg.lr0;
  if (cfg.n_epochs_decay == 0) return 0.0;
  if (epoch <= cfg.n_epochs + cfg.n_epochs_decay) {
    return cfg.lr0 *
           (1.0 - static_cast<double>(epoch - cfg.n_epochs) /
                      static_cast<double>(cfg.n_epochs_decay));
  }
  return 0.0;
}

void validate(const GeneratorConfig& cfg) {
  if (cfg.input_size < 8 || cfg.input_size % 4 != 0) {
    throw ConfigError("input_size must be >= 8 and divisible by 4");
  }
  if (cfg.base_channels < 1) throw ConfigError("base_channels must be positive");
  if (cfg.n_residual_blocks < 0) {
    throw ConfigError("n_residual_blocks must be non-negative");
  }
  std::vector<int> positions = cfg.attention_positions;
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
    throw ConfigError("attention_positions must be unique");
  }
  for (int p : positions) {
    if (p < 0 || p > 2) {
      throw ConfigError("attention_positions must lie in [0, 2]");
    }
  }
}

void validate(const ModelConfig& cfg) {
  validate(cfg.generator);
  if (cfg.disc_base_channels < 1) {
    throw ConfigError("disc_base_channels must be positive");
  }
  if (cfg.disc_layers < 1) throw ConfigError("disc_layers must be positive");
}

TrainConfig train_config_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read training config: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid training config JSON: " + std::string(e.what()));
  }
  TrainConfig cfg;
  if (j.contains("lr0")) cfg.lr0 = j["lr0"].get<double>();
  if (j.contains("beta1")) cfg.beta1 = j["beta1"].get<double>();
  if (j.contains("n_epochs")) cfg.n_epochs = j["n_epochs"].get<int>();
  if (j.contains("n_epochs_decay")) cfg.n_epochs_decay = j["n_epochs_decay"].get<int>();
  if (j.contains("lambda_cyc")) cfg.lambda_cyc = j["lambda_cyc"].get<double>();
  if (j.contains("lambda_id")) cfg.lambda_id = j["lambda_id"].get<double>();
  if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("checkpoint_every")) cfg.checkpoint_every = j["checkpoint_every"].get<int>();
  if (j.contains("fake_pool_size")) cfg.fake_pool_size = j["fake_pool_size"].get<int>();
  if (j.contains("random_flip")) cfg.random_flip = j["random_flip"].get<bool>();
  validate(cfg);
  return cfg;
}

}  // namespace nightforge::gan
