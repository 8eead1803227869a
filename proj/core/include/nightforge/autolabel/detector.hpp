#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "nightforge/core/types.hpp"

namespace nightforge::dataset {
class DatasetManifest;
}

namespace nightforge::autolabel {

/// One raw detection in the adapter's own class vocabulary.
struct Detection {
  int class_id = 0;          // adapter vocabulary, not the persisted scheme
  double confidence = 0.0;
  BoundingBox box;
};

struct FitTelemetry {
  double lr = 0.0;
  int epochs = 0;
};

/// Boundary to an external object detector. The surrounding pipeline only
/// ever talks to this interface; the bundled mock keeps it testable
/// without model weights. detect() must be deterministic for a fixed
/// artifact and input.
class DetectorAdapter {
 public:
  virtual ~DetectorAdapter() = default;

  virtual std::string name() const = 0;

  /// Class names indexed by the ids detect() emits. After fine-tuning on a
  /// two-class dataset this becomes the persisted scheme.
  virtual std::vector<std::string> class_vocabulary() const = 0;

  virtual std::vector<Detection> detect(const ImageRecord& image) = 0;

  /// True when detect() may be called from several threads at once.
  virtual bool safe_for_concurrent_inference() const { return false; }

  // -- fine-tuning surface --
  virtual std::vector<std::string> list_blocks() = 0;
  virtual void set_trainable(const std::set<std::string>& blocks) = 0;
  virtual void fit(const dataset::DatasetManifest& manifest, double lr,
                   int epochs) = 0;
  /// Stable digest of one block's parameters; unchanged blocks keep it.
  virtual std::string parameter_hash(const std::string& block) = 0;

  virtual void save(const std::filesystem::path& path) = 0;
  virtual void load(const std::filesystem::path& path) = 0;
};

}  // namespace nightforge::autolabel
