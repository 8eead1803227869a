#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nightforge/autolabel/autolabel.hpp"
#include "nightforge/autolabel/mock_detector.hpp"
#include "nightforge/core/errors.hpp"
#include "nightforge/scenegen/mock_simulator.hpp"

namespace nightforge::cli {

RunConfig RunConfig::load(const std::string& config_flag) {
  std::string path = config_flag;
  if (path.empty()) {
    if (const char* env = std::getenv("NIGHTFORGE_CONFIG")) path = env;
  }
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  try {
    in >> cfg.doc_;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid config JSON in " + path + ": " + e.what());
  }
  return cfg;
}

namespace {

const nlohmann::json* walk(const nlohmann::json& doc, const std::string& key) {
  const nlohmann::json* node = &doc;
  std::istringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

}  // namespace

bool RunConfig::has(const std::string& dotted_key) const {
  return walk(doc_, dotted_key) != nullptr;
}

nlohmann::json RunConfig::at(const std::string& dotted_key) const {
  const nlohmann::json* node = walk(doc_, dotted_key);
  if (!node) throw ConfigError("missing config key: " + dotted_key);
  return *node;
}

std::string RunConfig::path_at(const std::string& dotted_key) const {
  const auto value = at(dotted_key).get<std::string>();
  if (value.empty()) throw ConfigError("config key is empty: " + dotted_key);
  return value;
}

gan::TrainConfig RunConfig::train_config() const {
  gan::TrainConfig cfg;
  cfg.seed = seed();
  if (has("lr0")) cfg.lr0 = at("lr0").get<double>();
  if (has("beta1")) cfg.beta1 = at("beta1").get<double>();
  if (has("n_epochs")) cfg.n_epochs = at("n_epochs").get<int>();
  if (has("n_epochs_decay")) cfg.n_epochs_decay = at("n_epochs_decay").get<int>();
  if (has("lambda_cyc")) cfg.lambda_cyc = at("lambda_cyc").get<double>();
  if (has("lambda_id")) cfg.lambda_id = at("lambda_id").get<double>();
  if (has("batch_size")) cfg.batch_size = at("batch_size").get<int>();
  if (has("checkpoint_every")) cfg.checkpoint_every = at("checkpoint_every").get<int>();
  if (has("fake_pool_size")) cfg.fake_pool_size = at("fake_pool_size").get<int>();
  if (has("random_flip")) cfg.random_flip = at("random_flip").get<bool>();
  gan::validate(cfg);
  return cfg;
}

gan::ModelConfig RunConfig::model_config() const {
  gan::ModelConfig cfg;
  if (has("input_size")) cfg.generator.input_size = at("input_size").get<int>();
  if (has("base_channels")) cfg.generator.base_channels = at("base_channels").get<int>();
  if (has("n_residual_blocks")) {
    cfg.generator.n_residual_blocks = at("n_residual_blocks").get<int>();
  }
  if (has("attention_positions")) {
    cfg.generator.attention_positions =
        at("attention_positions").get<std::vector<int>>();
  }
  if (has("disc_base_channels")) {
    cfg.disc_base_channels = at("disc_base_channels").get<int>();
  }
  if (has("disc_layers")) cfg.disc_layers = at("disc_layers").get<int>();
  gan::validate(cfg);
  return cfg;
}

dataset::MixSpec RunConfig::mix_spec() const {
  const auto node = at("mix");
  if (node.is_string()) {
    return dataset::mix_spec_from_json_file(node.get<std::string>());
  }
  dataset::MixSpec spec;
  spec.seed = node.value("seed", seed());
  if (node.contains("splits")) {
    for (const auto& [name, j] : node.at("splits").items()) {
      dataset::SplitSpec s;
      if (j.contains("real")) s.real_count = j["real"].get<int>();
      if (j.contains("augmented")) s.augmented_count = j["augmented"].get<int>();
      if (j.contains("total")) s.total = j["total"].get<int>();
      if (j.contains("real_ratio")) s.real_ratio = j["real_ratio"].get<double>();
      if (j.contains("augmented_ratio")) {
        s.augmented_ratio = j["augmented_ratio"].get<double>();
      }
      spec.splits[name] = s;
    }
  }
  return spec;
}

finetune::StagePlan RunConfig::stage_plan(
    const std::vector<std::string>& blocks) const {
  std::string ref = "default";
  if (has("stage_plan")) ref = at("stage_plan").get<std::string>();
  finetune::StagePlan plan;
  if (ref == "default") {
    plan = finetune::default_stage_plan();
  } else if (ref == "default-exclusive") {
    plan = finetune::default_stage_plan(finetune::StagePlanMode::kExclusiveBlocks);
  } else {
    plan = finetune::stage_plan_from_json_file(ref);
  }
  finetune::validate(plan, blocks);
  return plan;
}

std::unique_ptr<autolabel::DetectorAdapter> RunConfig::make_detector(
    bool load_artifact) const {
  const std::string kind =
      has("detector.kind") ? at("detector.kind").get<std::string>() : "mock";
  if (kind != "mock") {
    throw ConfigError("unknown detector kind '" + kind +
                      "' (this build ships the 'mock' adapter)");
  }
  autolabel::MockDetector::Options options;
  if (has("detector.fixtures")) {
    options.fixtures_dir = path_at("detector.fixtures");
  }
  if (has("detector.skill")) options.skill = at("detector.skill").get<double>();
  auto detector = std::make_unique<autolabel::MockDetector>(options);
  if (load_artifact) detector->load(path_at("detector.model"));
  return detector;
}

std::unique_ptr<scenegen::SimulatorClient> RunConfig::make_simulator() const {
  const std::string kind =
      has("simulator.kind") ? at("simulator.kind").get<std::string>() : "mock";
  if (kind != "mock") {
    throw ConfigError("unknown simulator kind '" + kind +
                      "' (this build ships the scripted mock; point an RPC "
                      "binding at the same interface to use a real simulator)");
  }
  scenegen::MockSimulator::Options options;
  options.seed = seed();
  return std::make_unique<scenegen::MockSimulator>(options);
}

double RunConfig::conf_threshold() const {
  if (has("detector.conf_threshold")) {
    return at("detector.conf_threshold").get<double>();
  }
  return autolabel::kDefaultConfThreshold;
}

void RunConfig::write_run_manifest(const std::filesystem::path& out_dir,
                                   const std::string& subcommand) const {
  std::filesystem::create_directories(out_dir);
  nlohmann::json manifest{{"subcommand", subcommand}, {"config", doc_}};
  std::ofstream out(out_dir / "run_config.json");
  if (!out) throw IoError("cannot write run_config.json in " + out_dir.string());
  out << manifest.dump(2) << "\n";
}

}  // namespace nightforge::cli
