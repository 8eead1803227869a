#pragma once

#include <cstdint>
#include <optional>

#include "nightforge/autolabel/class_map.hpp"
#include "nightforge/autolabel/detector.hpp"

namespace nightforge::autolabel {

/// Deterministic scripted detector for tests and desk-scale pipeline runs.
///
/// Detections come from per-image fixture files (<fixtures>/<stem>.txt,
/// lines "class_id confidence cx cy w h" in the source vocabulary). A
/// skill level in [0,1] degrades them reproducibly: low skill hides some
/// detections, jitters boxes, and deflates confidence; skill 1 reproduces
/// the fixtures exactly. fit() raises the skill and rehashes exactly the
/// trainable blocks, so freezing is observable through parameter_hash().
///
/// Before the first fit the vocabulary is the source (COCO) one; after
/// fine-tuning on a two-class dataset the mock emits the persisted scheme,
/// like a detector whose head was re-trained on the new classes.
class MockDetector : public DetectorAdapter {
 public:
  struct Options {
    std::filesystem::path fixtures_dir;  // empty -> no detections
    double skill = 0.2;
    /// 1-based fit() call index that should fail (0 = never), for testing
    /// abort handling.
    int fail_on_fit_call = 0;
  };

  MockDetector() = default;
  explicit MockDetector(Options options);

  std::string name() const override { return "mock"; }
  std::vector<std::string> class_vocabulary() const override;
  std::vector<Detection> detect(const ImageRecord& image) override;
  bool safe_for_concurrent_inference() const override { return false; }

  std::vector<std::string> list_blocks() override;
  void set_trainable(const std::set<std::string>& blocks) override;
  void fit(const dataset::DatasetManifest& manifest, double lr,
           int epochs) override;
  std::string parameter_hash(const std::string& block) override;

  void save(const std::filesystem::path& path) override;
  void load(const std::filesystem::path& path) override;

  // -- test instrumentation --
  struct CallRecord {
    enum class Kind { kSetTrainable, kFit } kind;
    std::set<std::string> blocks;  // for kSetTrainable
    double lr = 0.0;               // for kFit
    int epochs = 0;
  };
  const std::vector<CallRecord>& calls() const { return calls_; }
  double skill() const { return skill_; }
  bool fine_tuned() const { return fine_tuned_; }

 private:
  Options options_;
  double skill_ = 0.2;
  bool fine_tuned_ = false;
  std::set<std::string> trainable_;
  std::map<std::string, std::uint64_t> block_hashes_;
  std::vector<CallRecord> calls_;
  int fit_calls_ = 0;
};

}  // namespace nightforge::autolabel
