#include "nightforge/finetune/stage_plan.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge::finetune {

std::set<std::string> StagePlan::frozen_for(
    size_t stage_index, const std::vector<std::string>& blocks) const {
  std::set<std::string> frozen(blocks.begin(), blocks.end());
  for (const auto& b : stages.at(stage_index).trainable) frozen.erase(b);
  return frozen;
}

StagePlan default_stage_plan(StagePlanMode mode) {
  StagePlan plan;
  if (mode == StagePlanMode::kProgressiveFreeze) {
    plan.stages = {
        {"backbone", {"backbone", "neck", "head"}, 1e-4, 50},
        {"neck", {"neck", "head"}, 5e-5, 50},
        {"head", {"head"}, 1e-5, 50},
    };
  } else {
    plan.stages = {
        {"backbone", {"backbone"}, 1e-4, 50},
        {"neck", {"neck"}, 5e-5, 50},
        {"head", {"head"}, 1e-5, 50},
    };
  }
  return plan;
}

void validate(const StagePlan& plan,
              const std::vector<std::string>& adapter_blocks) {
  if (plan.stages.empty()) {
    throw ConfigError("stage plan must have at least one stage");
  }
  for (const auto& stage : plan.stages) {
    if (stage.trainable.empty()) {
      throw ConfigError("stage '" + stage.name + "' trains no blocks");
    }
    if (stage.lr <= 0.0) {
      throw ConfigError("stage '" + stage.name + "' has non-positive lr");
    }
    if (stage.epochs <= 0) {
      throw ConfigError("stage '" + stage.name + "' has non-positive epochs");
    }
    for (const auto& block : stage.trainable) {
      if (std::find(adapter_blocks.begin(), adapter_blocks.end(), block) ==
          adapter_blocks.end()) {
        throw ConfigError("stage '" + stage.name +
                          "' names a block the adapter lacks: " + block);
      }
    }
  }
}

StagePlan stage_plan_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stage plan: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid stage plan JSON: " + std::string(e.what()));
  }
  StagePlan plan;
  for (const auto& j : doc.at("stages")) {
    Stage stage;
    stage.name = j.value("name", "stage" + std::to_string(plan.stages.size() + 1));
    for (const auto& b : j.at("trainable")) {
      stage.trainable.insert(b.get<std::string>());
    }
    stage.lr = j.at("lr").get<double>();
    stage.epochs = j.at("epochs").get<int>();
    plan.stages.push_back(std::move(stage));
  }
  return plan;
}

std::string to_json_string(const StagePlan& plan) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& stage : plan.stages) {
    stages.push_back({{"name", stage.name},
                      {"trainable", stage.trainable},
                      {"lr", stage.lr},
                      {"epochs", stage.epochs}});
  }
  return nlohmann::json{{"stages", stages}}.dump(2);
}

}  // namespace nightforge::finetune
