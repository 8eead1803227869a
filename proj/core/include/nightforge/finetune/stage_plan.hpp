#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace nightforge::finetune {

struct Stage {
  std::string name;
  std::set<std::string> trainable;
  double lr = 0.0;
  int epochs = 0;
};

/// Ordered fine-tuning stages. Within each stage the frozen set is the
/// complement of the trainable set over the adapter's blocks.
struct StagePlan {
  std::vector<Stage> stages;

  std::set<std::string> frozen_for(size_t stage_index,
                                   const std::vector<std::string>& blocks) const;
};

/// How stage trainable sets are derived in the default plan. The staged
/// recipe freezes blocks cumulatively: nothing in stage 1, the backbone in
/// stage 2, backbone+neck in stage 3. The exclusive variant trains exactly
/// one block per stage instead; both are exposed because the prose supports
/// either reading.
enum class StagePlanMode {
  kProgressiveFreeze,  // default: frozen sets {}, {backbone}, {backbone,neck}
  kExclusiveBlocks,    // trainable sets {backbone}, {neck}, {head}
};

/// Three stages over backbone/neck/head with learning rates 1e-4, 5e-5,
/// 1e-5 and 50 epochs each.
StagePlan default_stage_plan(StagePlanMode mode = StagePlanMode::kProgressiveFreeze);

/// Throws ConfigError when the plan is empty, a stage has nothing to
/// train, lr <= 0, epochs <= 0, or a trainable block is not one the
/// adapter reports.
void validate(const StagePlan& plan, const std::vector<std::string>& adapter_blocks);

StagePlan stage_plan_from_json_file(const std::filesystem::path& path);
std::string to_json_string(const StagePlan& plan);

}  // namespace nightforge::finetune
