#include "nightforge/gan/model.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"
#include "nightforge/nn/serialize.hpp"

namespace nightforge::gan {

namespace {

constexpr int kCheckpointVersion = 1;

std::vector<std::pair<std::string, nn::Tensor>> named_values(
    std::vector<nn::NamedParam> params) {
  std::vector<std::pair<std::string, nn::Tensor>> out;
  out.reserve(params.size());
  for (auto& p : params) out.emplace_back(p.name, p.var->value());
  return out;
}

void restore(std::vector<nn::NamedParam> params,
             const std::map<std::string, nn::Tensor>& tensors,
             const std::filesystem::path& file) {
  for (auto& p : params) {
    auto it = tensors.find(p.name);
    if (it == tensors.end()) {
      throw IoError("checkpoint missing tensor '" + p.name + "' in " +
                    file.string());
    }
    if (!it->second.same_shape(p.var->value())) {
      throw IoError("checkpoint tensor '" + p.name + "' has wrong shape in " +
                    file.string());
    }
    p.var->value() = it->second.clone();
  }
}

nlohmann::json train_cfg_to_json(const TrainConfig& cfg) {
  return nlohmann::json{{"lr0", cfg.lr0},
                        {"beta1", cfg.beta1},
                        {"n_epochs", cfg.n_epochs},
                        {"n_epochs_decay", cfg.n_epochs_decay},
                        {"lambda_cyc", cfg.lambda_cyc},
                        {"lambda_id", cfg.lambda_id},
                        {"batch_size", cfg.batch_size},
                        {"seed", cfg.seed},
                        {"checkpoint_every", cfg.checkpoint_every},
                        {"fake_pool_size", cfg.fake_pool_size},
                        {"random_flip", cfg.random_flip}};
}

TrainConfig train_cfg_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.lr0 = j.at("lr0").get<double>();
  cfg.beta1 = j.at("beta1").get<double>();
  cfg.n_epochs = j.at("n_epochs").get<int>();
  cfg.n_epochs_decay = j.at("n_epochs_decay").get<int>();
  cfg.lambda_cyc = j.at("lambda_cyc").get<double>();
  cfg.lambda_id = j.at("lambda_id").get<double>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.checkpoint_every = j.at("checkpoint_every").get<int>();
  cfg.fake_pool_size = j.at("fake_pool_size").get<int>();
  cfg.random_flip = j.value("random_flip", false);
  return cfg;
}

nlohmann::json model_cfg_to_json(const ModelConfig& cfg) {
  return nlohmann::json{{"input_size", cfg.generator.input_size},
                        {"base_channels", cfg.generator.base_channels},
                        {"n_residual_blocks", cfg.generator.n_residual_blocks},
                        {"attention_positions", cfg.generator.attention_positions},
                        {"disc_base_channels", cfg.disc_base_channels},
                        {"disc_layers", cfg.disc_layers}};
}

ModelConfig model_cfg_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.generator.input_size = j.at("input_size").get<int>();
  cfg.generator.base_channels = j.at("base_channels").get<int>();
  cfg.generator.n_residual_blocks = j.at("n_residual_blocks").get<int>();
  cfg.generator.attention_positions =
      j.at("attention_positions").get<std::vector<int>>();
  cfg.disc_base_channels = j.at("disc_base_channels").get<int>();
  cfg.disc_layers = j.at("disc_layers").get<int>();
  return cfg;
}

}  // namespace

TranslationModel::TranslationModel(const ModelConfig& cfg, std::uint64_t seed)
    : cfg_(cfg) {
  validate(cfg);
  std::mt19937_64 rng(seed);
  day_to_night_ = Generator(cfg.generator, rng);
  night_to_day_ = Generator(cfg.generator, rng);
  disc_day_ = PatchDiscriminator(3, cfg.disc_base_channels, cfg.disc_layers, rng);
  disc_night_ = PatchDiscriminator(3, cfg.disc_base_channels, cfg.disc_layers, rng);
}

std::vector<nn::NamedParam> TranslationModel::generator_params() {
  std::vector<nn::NamedParam> params;
  day_to_night_.collect("G", params);
  night_to_day_.collect("F", params);
  return params;
}

std::vector<nn::NamedParam> TranslationModel::discriminator_params() {
  std::vector<nn::NamedParam> params;
  disc_day_.collect("D_X", params);
  disc_night_.collect("D_Y", params);
  return params;
}

void save_checkpoint(const std::filesystem::path& dir, TranslationModel& model,
                     const TrainConfig& train_cfg, int epoch) {
  std::filesystem::create_directories(dir);
  std::vector<nn::NamedParam> g_params, f_params, dx_params, dy_params;
  model.day_to_night().collect("G", g_params);
  model.night_to_day().collect("F", f_params);
  model.day_discriminator().collect("D_X", dx_params);
  model.night_discriminator().collect("D_Y", dy_params);
  nn::save_tensors(dir / "G.nft", named_values(g_params));
  nn::save_tensors(dir / "F.nft", named_values(f_params));
  nn::save_tensors(dir / "D_X.nft", named_values(dx_params));
  nn::save_tensors(dir / "D_Y.nft", named_values(dy_params));
  nlohmann::json meta{{"format_version", kCheckpointVersion},
                      {"epoch", epoch},
                      {"train_config", train_cfg_to_json(train_cfg)},
                      {"model_config", model_cfg_to_json(model.config())}};
  std::ofstream out(dir / "metadata.json");
  if (!out) throw IoError("cannot write checkpoint metadata in " + dir.string());
  out << meta.dump(2) << "\n";
}

LoadedCheckpoint read_checkpoint_metadata(const std::filesystem::path& dir) {
  std::ifstream in(dir / "metadata.json");
  if (!in) {
    throw IoError("not a checkpoint directory (metadata.json missing): " +
                  dir.string());
  }
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt checkpoint metadata: " + std::string(e.what()));
  }
  if (meta.at("format_version").get<int>() != kCheckpointVersion) {
    throw IoError("unsupported checkpoint format version");
  }
  LoadedCheckpoint info;
  info.epoch = meta.at("epoch").get<int>();
  info.train_cfg = train_cfg_from_json(meta.at("train_config"));
  info.model_cfg = model_cfg_from_json(meta.at("model_config"));
  return info;
}

CheckpointedModel::CheckpointedModel(const std::filesystem::path& dir) {
  info_ = read_checkpoint_metadata(dir);
  model_ = std::make_unique<TranslationModel>(info_.model_cfg, info_.train_cfg.seed);
  std::vector<nn::NamedParam> params;
  model_->day_to_night().collect("G", params);
  restore(params, nn::load_tensors(dir / "G.nft"), dir / "G.nft");
  params.clear();
  model_->night_to_day().collect("F", params);
  restore(params, nn::load_tensors(dir / "F.nft"), dir / "F.nft");
  params.clear();
  model_->day_discriminator().collect("D_X", params);
  restore(params, nn::load_tensors(dir / "D_X.nft"), dir / "D_X.nft");
  params.clear();
  model_->night_discriminator().collect("D_Y", params);
  restore(params, nn::load_tensors(dir / "D_Y.nft"), dir / "D_Y.nft");
}

}  // namespace nightforge::gan
