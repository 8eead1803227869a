#include "nightforge/dataset/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge::dataset {

const std::vector<ManifestEntry>* DatasetManifest::split(
    const std::string& name) const {
  for (const auto& [split_name, entries] : splits) {
    if (split_name == name) return &entries;
  }
  return nullptr;
}

int DatasetManifest::total_images() const {
  int n = 0;
  for (const auto& [_, entries] : splits) n += static_cast<int>(entries.size());
  return n;
}

std::string to_json_string(const DatasetManifest& manifest) {
  nlohmann::json splits = nlohmann::json::object();
  for (const auto& [name, entries] : manifest.splits) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : entries) {
      nlohmann::json j{{"image", e.image},
                       {"label", e.label},
                       {"domain", std::string(to_string(e.domain))}};
      j["source"] = e.source ? nlohmann::json(*e.source) : nlohmann::json(nullptr);
      list.push_back(j);
    }
    splits[name] = list;
  }
  nlohmann::json requested = nlohmann::json::object();
  for (const auto& [name, r] : manifest.requested) {
    requested[name] = {{"real", r.real}, {"augmented", r.augmented}};
  }
  nlohmann::json doc{{"schema_version", manifest.schema_version},
                     {"seed", manifest.seed},
                     {"tool_version", manifest.tool_version},
                     {"classes", manifest.classes},
                     {"requested", requested},
                     {"splits", splits}};
  return doc.dump(2);
}

void save_manifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << to_json_string(manifest) << "\n";
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid manifest JSON: " + std::string(e.what()));
  }
  DatasetManifest manifest;
  manifest.schema_version = doc.at("schema_version").get<int>();
  if (manifest.schema_version != 1) {
    throw ValidationError("unsupported manifest schema version");
  }
  manifest.seed = doc.at("seed").get<std::uint64_t>();
  manifest.tool_version = doc.value("tool_version", "");
  manifest.classes = doc.at("classes").get<std::vector<std::string>>();
  if (doc.contains("requested")) {
    for (const auto& [name, j] : doc.at("requested").items()) {
      manifest.requested[name] = {j.at("real").get<int>(),
                                  j.at("augmented").get<int>()};
    }
  }
  // Preserve canonical order; unknown split names come after, sorted.
  std::map<std::string, std::vector<ManifestEntry>> parsed;
  for (const auto& [name, list] : doc.at("splits").items()) {
    std::vector<ManifestEntry> entries;
    for (const auto& j : list) {
      ManifestEntry e;
      e.image = j.at("image").get<std::string>();
      e.label = j.at("label").get<std::string>();
      e.domain = domain_from_string(j.at("domain").get<std::string>());
      if (j.contains("source") && !j.at("source").is_null()) {
        e.source = j.at("source").get<std::string>();
      }
      entries.push_back(std::move(e));
    }
    parsed[name] = std::move(entries);
  }
  for (const auto& name : split_names()) {
    auto it = parsed.find(name);
    if (it != parsed.end()) {
      manifest.splits.emplace_back(name, std::move(it->second));
      parsed.erase(it);
    }
  }
  for (auto& [name, entries] : parsed) {
    manifest.splits.emplace_back(name, std::move(entries));
  }
  manifest.root = path.parent_path();
  return manifest;
}

void write_dataset_description(const std::filesystem::path& path,
                               const DatasetManifest& manifest) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset description: " + path.string());
  out << "path: .\n";
  for (const auto& [name, _] : manifest.splits) {
    out << name << ": images/" << name << "\n";
  }
  out << "names:\n";
  for (size_t i = 0; i < manifest.classes.size(); ++i) {
    out << "  " << i << ": " << manifest.classes[i] << "\n";
  }
}

}  // namespace nightforge::dataset
