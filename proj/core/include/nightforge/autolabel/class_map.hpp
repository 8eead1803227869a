#pragma once

#include <map>
#include <optional>
#include <string>

namespace nightforge::autolabel {

/// Partial mapping from a detector's class ids to the persisted two-class
/// scheme. Unmapped ids are dropped (and counted by the corpus report).
class ClassMap {
 public:
  ClassMap() = default;
  explicit ClassMap(std::map<int, int> mapping);

  std::optional<int> remap(int source_class_id) const;
  bool maps(int source_class_id) const { return mapping_.count(source_class_id) > 0; }
  const std::map<int, int>& mapping() const { return mapping_; }

  /// Display name for a target class on the raw (pre-remap) side of a
  /// comparison, e.g. 0 -> "car".
  std::optional<std::string> source_name(int target_class) const;
  void set_source_name(int target_class, std::string name);

 private:
  std::map<int, int> mapping_;
  std::map<int, std::string> source_names_;
};

/// COCO vehicle classes onto the persisted scheme: car (2) -> Sedan (0);
/// bus (5) and truck (7) -> SVP_BV (1). Everything else is dropped.
ClassMap default_class_map();

}  // namespace nightforge::autolabel
