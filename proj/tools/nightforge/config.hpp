#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nightforge/autolabel/detector.hpp"
#include "nightforge/dataset/mix_spec.hpp"
#include "nightforge/finetune/stage_plan.hpp"
#include "nightforge/gan/config.hpp"
#include "nightforge/scenegen/simulator.hpp"

namespace nightforge::cli {

/// Resolved run configuration: JSON file (path flag or NIGHTFORGE_CONFIG)
/// with flag overrides folded in. Reader helpers throw ConfigError naming
/// the missing key.
class RunConfig {
 public:
  RunConfig() : doc_(nlohmann::json::object()) {}

  static RunConfig load(const std::string& config_flag);

  nlohmann::json& doc() { return doc_; }
  const nlohmann::json& doc() const { return doc_; }

  void set(const std::string& key, const nlohmann::json& value) { doc_[key] = value; }

  bool has(const std::string& dotted_key) const;
  nlohmann::json at(const std::string& dotted_key) const;  // throws ConfigError
  std::string path_at(const std::string& dotted_key) const;

  gan::TrainConfig train_config() const;
  gan::ModelConfig model_config() const;
  std::uint64_t seed() const { return doc_.value("seed", 7ull); }

  dataset::MixSpec mix_spec() const;
  finetune::StagePlan stage_plan(const std::vector<std::string>& blocks) const;
  std::unique_ptr<autolabel::DetectorAdapter> make_detector(
      bool load_artifact = false) const;
  std::unique_ptr<scenegen::SimulatorClient> make_simulator() const;
  double conf_threshold() const;

  /// Writes the resolved configuration next to a run's outputs so the run
  /// is reproducible from its artifacts alone.
  void write_run_manifest(const std::filesystem::path& out_dir,
                          const std::string& subcommand) const;

 private:
  nlohmann::json doc_;
};

}  // namespace nightforge::cli
