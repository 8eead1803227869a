#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nightforge/core/types.hpp"
#include "nightforge/dataset/mix_spec.hpp"

namespace nightforge::dataset {

struct ManifestEntry {
  std::string image;  // path relative to the manifest's directory
  std::string label;
  Domain domain = Domain::kNightReal;
  std::optional<std::string> source;  // daytime provenance for transfers
};

/// Split membership plus the creation metadata needed to reproduce it.
class DatasetManifest {
 public:
  int schema_version = 1;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::string> classes;
  std::map<std::string, ResolvedSplit> requested;  // resolved MixSpec
  std::vector<std::pair<std::string, std::vector<ManifestEntry>>> splits;

  /// Directory the relative entry paths resolve against. Set on load/save,
  /// not serialized.
  std::filesystem::path root;

  const std::vector<ManifestEntry>* split(const std::string& name) const;
  std::filesystem::path resolve(const std::string& relative) const {
    return root / relative;
  }
  int total_images() const;
};

std::string to_json_string(const DatasetManifest& manifest);
void save_manifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Detector-facing dataset description (split directories + class names)
/// written next to the manifest.
void write_dataset_description(const std::filesystem::path& path,
                               const DatasetManifest& manifest);

}  // namespace nightforge::dataset
