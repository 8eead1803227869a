#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "nightforge/autolabel/mock_detector.hpp"
#include "nightforge/core/errors.hpp"
#include "nightforge/dataset/forge.hpp"
#include "nightforge/finetune/runner.hpp"
#include "support/tempdir.hpp"
#include "support/toyworld.hpp"

using namespace nightforge;
using namespace nightforge::finetune;
using autolabel::MockDetector;

namespace {

/// Small assembled corpus whose labels agree with the detector fixtures.
dataset::DatasetManifest tiny_manifest(const testsupport::TempDir& dir,
                                       const std::filesystem::path& fixtures) {
  std::vector<LabeledImage> real;
  for (int i = 0; i < 6; ++i) {
    const auto vehicles = testsupport::scripted_vehicles(41, 700 + i);
    const auto name = "night_" + std::to_string(i);
    const auto path = dir / (name + ".png");
    save_image(path, testsupport::render_night_scene(48, 48, vehicles, i));
    testsupport::write_detector_fixture(fixtures / (name + ".txt"), vehicles);
    LabeledImage item;
    item.image.path = path;
    item.image.width_px = 48;
    item.image.height_px = 48;
    item.image.domain = Domain::kNightReal;
    const auto map = autolabel::default_class_map();
    for (const auto& v : vehicles) {
      if (const auto target = map.remap(v.coco_class)) {
        item.annotations.push_back({*target, v.box, {}});
      }
    }
    real.push_back(std::move(item));
  }
  dataset::MixSpec spec;
  spec.seed = 3;
  spec.splits["train"] = dataset::SplitSpec{4, 0, {}, {}, {}};
  spec.splits["val"] = dataset::SplitSpec{2, 0, {}, {}, {}};
  return dataset::assemble(real, {}, spec, dir / "dataset");
}

}  // namespace

TEST_CASE("default plan: rates, epochs, frozen sets in both modes") {
  const auto plan = default_stage_plan();
  REQUIRE(plan.stages.size() == 3);
  CHECK(plan.stages[0].lr == 1e-4);
  CHECK(plan.stages[1].lr == 5e-5);
  CHECK(plan.stages[2].lr == 1e-5);
  for (const auto& stage : plan.stages) CHECK(stage.epochs == 50);
  CHECK(plan.stages[0].lr > plan.stages[1].lr);
  CHECK(plan.stages[1].lr > plan.stages[2].lr);

  const std::vector<std::string> blocks = {"backbone", "neck", "head"};
  CHECK(plan.frozen_for(0, blocks) == std::set<std::string>{});
  CHECK(plan.frozen_for(1, blocks) == std::set<std::string>{"backbone"});
  CHECK(plan.frozen_for(2, blocks) ==
        std::set<std::string>{"backbone", "neck"});

  const auto exclusive = default_stage_plan(StagePlanMode::kExclusiveBlocks);
  CHECK(exclusive.stages[0].trainable == std::set<std::string>{"backbone"});
  CHECK(exclusive.stages[1].trainable == std::set<std::string>{"neck"});
  CHECK(exclusive.stages[2].trainable == std::set<std::string>{"head"});
  CHECK(exclusive.frozen_for(2, blocks) ==
        std::set<std::string>{"backbone", "neck"});
}

TEST_CASE("plan validation") {
  const std::vector<std::string> blocks = {"backbone", "neck", "head"};
  StagePlan empty;
  CHECK_THROWS_AS(validate(empty, blocks), ConfigError);

  StagePlan bad_lr = default_stage_plan();
  bad_lr.stages[0].lr = 0.0;
  CHECK_THROWS_AS(validate(bad_lr, blocks), ConfigError);

  StagePlan bad_epochs = default_stage_plan();
  bad_epochs.stages[1].epochs = 0;
  CHECK_THROWS_AS(validate(bad_epochs, blocks), ConfigError);

  StagePlan unknown = default_stage_plan();
  unknown.stages[2].trainable.insert("adapter_head");
  CHECK_THROWS_AS(validate(unknown, blocks), ConfigError);

  CHECK_NOTHROW(validate(default_stage_plan(), blocks));
}

TEST_CASE("stage plan JSON round trip") {
  testsupport::TempDir dir("plan");
  const auto plan = default_stage_plan();
  std::ofstream(dir / "plan.json") << to_json_string(plan);
  const auto loaded = stage_plan_from_json_file(dir / "plan.json");
  REQUIRE(loaded.stages.size() == 3);
  CHECK(loaded.stages[0].trainable == plan.stages[0].trainable);
  CHECK(loaded.stages[2].lr == plan.stages[2].lr);
}

TEST_CASE("run drives the adapter with exactly the planned call sequence") {
  testsupport::TempDir dir("run");
  const auto fixtures = dir / "fixtures";
  const auto manifest = tiny_manifest(dir, fixtures);
  MockDetector adapter({fixtures, 0.2});

  const auto plan = default_stage_plan();
  const auto result = run(adapter, manifest, plan, dir / "out");

  const auto& calls = adapter.calls();
  REQUIRE(calls.size() == 6);  // (set_trainable, fit) x 3, nothing else
  using Kind = MockDetector::CallRecord::Kind;
  CHECK(calls[0].kind == Kind::kSetTrainable);
  CHECK(calls[0].blocks == plan.stages[0].trainable);
  CHECK(calls[1].kind == Kind::kFit);
  CHECK(calls[1].lr == 1e-4);
  CHECK(calls[1].epochs == 50);
  CHECK(calls[2].blocks == plan.stages[1].trainable);
  CHECK(calls[3].lr == 5e-5);
  CHECK(calls[4].blocks == plan.stages[2].trainable);
  CHECK(calls[5].lr == 1e-5);

  REQUIRE(result.stage_log.size() == 3);
  for (const auto& row : result.stage_log) {
    CHECK(row.epochs == 50);
    CHECK(row.val_map50.has_value());
  }
  CHECK(std::filesystem::exists(result.final_artifact));
  CHECK(std::filesystem::exists(result.best_artifact));
  CHECK(std::filesystem::exists(dir / "out" / "stage_log.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "finetune_metadata.json"));

  // plan embedded in the artifact metadata
  std::ifstream meta(dir / "out" / "finetune_metadata.json");
  std::string contents((std::istreambuf_iterator<char>(meta)),
                       std::istreambuf_iterator<char>());
  CHECK(contents.find("\"plan\"") != std::string::npos);
  CHECK(contents.find("backbone") != std::string::npos);
}

TEST_CASE("exclusive mode records the one-block-per-stage trace") {
  testsupport::TempDir dir("excl");
  const auto fixtures = dir / "fixtures";
  const auto manifest = tiny_manifest(dir, fixtures);
  MockDetector adapter({fixtures, 0.2});
  run(adapter, manifest, default_stage_plan(StagePlanMode::kExclusiveBlocks),
      dir / "out");
  const auto& calls = adapter.calls();
  REQUIRE(calls.size() == 6);
  CHECK(calls[0].blocks == std::set<std::string>{"backbone"});
  CHECK(calls[2].blocks == std::set<std::string>{"neck"});
  CHECK(calls[4].blocks == std::set<std::string>{"head"});
}

TEST_CASE("frozen blocks keep their parameter hashes") {
  testsupport::TempDir dir("hash");
  const auto fixtures = dir / "fixtures";
  const auto manifest = tiny_manifest(dir, fixtures);
  MockDetector adapter({fixtures, 0.2});

  const auto before_backbone = adapter.parameter_hash("backbone");
  const auto before_neck = adapter.parameter_hash("neck");
  const auto before_head = adapter.parameter_hash("head");

  // stage 2 of the default plan: backbone frozen, neck+head trainable
  adapter.set_trainable({"neck", "head"});
  adapter.fit(manifest, 5e-5, 50);
  CHECK(adapter.parameter_hash("backbone") == before_backbone);
  CHECK(adapter.parameter_hash("neck") != before_neck);
  CHECK(adapter.parameter_hash("head") != before_head);

  // stage 3: only the head moves
  const auto neck_after_stage2 = adapter.parameter_hash("neck");
  adapter.set_trainable({"head"});
  adapter.fit(manifest, 1e-5, 50);
  CHECK(adapter.parameter_hash("backbone") == before_backbone);
  CHECK(adapter.parameter_hash("neck") == neck_after_stage2);
}

TEST_CASE("single-stage plan performs exactly one set_trainable/fit pair") {
  testsupport::TempDir dir("single");
  const auto fixtures = dir / "fixtures";
  const auto manifest = tiny_manifest(dir, fixtures);
  MockDetector adapter({fixtures, 0.2});
  StagePlan plan;
  plan.stages = {{"head", {"head"}, 1e-5, 10}};
  run(adapter, manifest, plan, dir / "out");
  CHECK(adapter.calls().size() == 2);
}

TEST_CASE("fit failure leaves a FAILED marker and partial artifacts") {
  testsupport::TempDir dir("fail");
  const auto fixtures = dir / "fixtures";
  const auto manifest = tiny_manifest(dir, fixtures);
  MockDetector::Options options{fixtures, 0.2};
  options.fail_on_fit_call = 2;
  MockDetector adapter(options);
  CHECK_THROWS(run(adapter, manifest, default_stage_plan(), dir / "out"));
  CHECK(std::filesystem::exists(dir / "out" / "FAILED"));
  CHECK(std::filesystem::exists(dir / "out" / "model_stage_1.json"));
  CHECK(!std::filesystem::exists(dir / "out" / "model_final.json"));
}

TEST_CASE("validation score improves across stages with the mock") {
  testsupport::TempDir dir("score");
  const auto fixtures = dir / "fixtures";
  const auto manifest = tiny_manifest(dir, fixtures);
  MockDetector adapter({fixtures, 0.1});
  const auto result = run(adapter, manifest, default_stage_plan(), dir / "out");
  REQUIRE(result.stage_log.size() == 3);
  CHECK(result.stage_log.back().val_map50.value() >=
        result.stage_log.front().val_map50.value());
  CHECK(result.best_stage >= 1);
}
