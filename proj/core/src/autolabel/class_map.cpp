#include "nightforge/autolabel/class_map.hpp"

#include "nightforge/core/errors.hpp"
#include "nightforge/core/types.hpp"

namespace nightforge::autolabel {

ClassMap::ClassMap(std::map<int, int> mapping) : mapping_(std::move(mapping)) {
  for (const auto& [source, target] : mapping_) {
    if (target != kClassSedan && target != kClassSvpBv) {
      throw ValidationError("class map target outside the two-class scheme: " +
                            std::to_string(target));
    }
  }
}

std::optional<int> ClassMap::remap(int source_class_id) const {
  auto it = mapping_.find(source_class_id);
  if (it == mapping_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> ClassMap::source_name(int target_class) const {
  auto it = source_names_.find(target_class);
  if (it == source_names_.end()) return std::nullopt;
  return it->second;
}

void ClassMap::set_source_name(int target_class, std::string name) {
  source_names_[target_class] = std::move(name);
}

ClassMap default_class_map() {
  ClassMap map(std::map<int, int>{
      {2, kClassSedan},   // COCO car
      {5, kClassSvpBv},   // COCO bus
      {7, kClassSvpBv},   // COCO truck
  });
  map.set_source_name(kClassSedan, "car");
  map.set_source_name(kClassSvpBv, "truck");
  return map;
}

}  // namespace nightforge::autolabel
