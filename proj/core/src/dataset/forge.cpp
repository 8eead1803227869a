#include "nightforge/dataset/forge.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "nightforge/core/annotation_io.hpp"
#include "nightforge/core/errors.hpp"
#include "nightforge/core/image.hpp"
#include "nightforge/gan/translate.hpp"

namespace nightforge::dataset {

namespace {

constexpr const char* kToolVersion = "nightforge-0.1.0";

std::string stem_of(const LabeledImage& labeled) {
  return labeled.image.path.stem().string();
}

void check_unique_stems(const std::vector<LabeledImage>& pool,
                        const char* pool_name, std::set<std::string>& seen) {
  for (const auto& item : pool) {
    const std::string stem = stem_of(item);
    if (!seen.insert(stem).second) {
      throw ValidationError(std::string(pool_name) +
                            " pool has duplicate stem: " + stem);
    }
  }
}

/// Items that must stay in one split: a transferred image together with
/// any siblings derived from the same daytime source.
struct SourceGroup {
  std::string key;
  std::vector<const LabeledImage*> members;
};

std::vector<SourceGroup> group_by_source(const std::vector<LabeledImage>& pool) {
  std::map<std::string, SourceGroup> groups;
  for (const auto& item : pool) {
    const std::string key = item.image.source_of
                                ? item.image.source_of->stem().string()
                                : stem_of(item);
    auto& group = groups[key];
    group.key = key;
    group.members.push_back(&item);
  }
  std::vector<SourceGroup> out;
  out.reserve(groups.size());
  for (auto& [_, group] : groups) out.push_back(std::move(group));
  return out;  // std::map iteration -> sorted by key
}

ManifestEntry materialize(const LabeledImage& item, const std::string& split,
                          const std::filesystem::path& out_root) {
  const std::string filename = item.image.path.filename().string();
  const std::string stem = item.image.path.stem().string();
  const auto image_rel =
      std::filesystem::path("images") / split / filename;
  const auto label_rel =
      std::filesystem::path("labels") / split / (stem + ".txt");
  std::filesystem::create_directories((out_root / image_rel).parent_path());
  std::filesystem::copy_file(item.image.path, out_root / image_rel,
                             std::filesystem::copy_options::overwrite_existing);
  write_annotation_file(out_root / label_rel, item.annotations);
  ManifestEntry entry;
  entry.image = image_rel.generic_string();
  entry.label = label_rel.generic_string();
  entry.domain = item.image.domain;
  if (item.image.source_of) entry.source = item.image.source_of->string();
  return entry;
}

}  // namespace

DatasetManifest assemble(const std::vector<LabeledImage>& real_pool,
                         const std::vector<LabeledImage>& augmented_pool,
                         const MixSpec& spec,
                         const std::filesystem::path& out_root) {
  std::set<std::string> stems;
  check_unique_stems(real_pool, "real", stems);
  check_unique_stems(augmented_pool, "augmented", stems);

  std::map<std::string, ResolvedSplit> requested;
  for (const auto& name : split_names()) {
    auto it = spec.splits.find(name);
    requested[name] = it == spec.splits.end() ? ResolvedSplit{}
                                              : resolve(it->second, name);
  }
  for (const auto& [name, _] : spec.splits) {
    if (std::find(split_names().begin(), split_names().end(), name) ==
        split_names().end()) {
      throw ConfigError("unknown split name: " + name);
    }
  }

  // Canonical order then a seeded shuffle makes assembly a pure function
  // of (pools, spec).
  std::vector<const LabeledImage*> reals;
  for (const auto& item : real_pool) reals.push_back(&item);
  std::sort(reals.begin(), reals.end(),
            [](const LabeledImage* a, const LabeledImage* b) {
              return a->image.path.stem() < b->image.path.stem();
            });
  std::vector<SourceGroup> groups = group_by_source(augmented_pool);

  std::mt19937_64 rng(spec.seed);
  std::shuffle(reals.begin(), reals.end(), rng);
  std::shuffle(groups.begin(), groups.end(), rng);

  DatasetManifest manifest;
  manifest.seed = spec.seed;
  manifest.tool_version = kToolVersion;
  manifest.classes = class_names();
  manifest.requested = requested;
  manifest.root = out_root;

  size_t next_real = 0;
  std::vector<bool> group_used(groups.size(), false);
  for (const auto& name : split_names()) {
    const ResolvedSplit want = requested[name];
    std::vector<ManifestEntry> entries;

    const size_t real_available = reals.size() - next_real;
    if (static_cast<size_t>(want.real) > real_available) {
      throw ConfigError("split '" + name + "' needs " +
                        std::to_string(want.real) + " real images, only " +
                        std::to_string(real_available) + " left in the pool");
    }
    for (int i = 0; i < want.real; ++i) {
      entries.push_back(materialize(*reals[next_real++], name, out_root));
    }

    int remaining = want.augmented;
    for (size_t g = 0; g < groups.size() && remaining > 0; ++g) {
      if (group_used[g]) continue;
      const int size = static_cast<int>(groups[g].members.size());
      if (size > remaining) continue;  // whole groups only (leakage rule)
      group_used[g] = true;
      remaining -= size;
      for (const LabeledImage* item : groups[g].members) {
        entries.push_back(materialize(*item, name, out_root));
      }
    }
    if (remaining > 0) {
      throw ConfigError("split '" + name + "' is short " +
                        std::to_string(remaining) +
                        " augmented images (source groups are kept whole)");
    }
    manifest.splits.emplace_back(name, std::move(entries));
  }

  save_manifest(out_root / "manifest.json", manifest);
  write_dataset_description(out_root / "dataset.yaml", manifest);
  return manifest;
}

namespace {

bool is_real_domain(Domain d) {
  return d == Domain::kDayReal || d == Domain::kNightReal;
}

}  // namespace

ValidationReport validate(const DatasetManifest& manifest) {
  ValidationReport report;
  auto violate = [&](const std::string& type, const std::string& detail) {
    report.violations.push_back({type, detail});
  };

  std::map<std::string, std::string> stem_to_split;
  std::map<std::string, std::string> source_to_split;
  for (const auto& [split, entries] : manifest.splits) {
    for (const auto& entry : entries) {
      ++report.images_checked;
      const auto image_path = manifest.resolve(entry.image);
      const auto label_path = manifest.resolve(entry.label);
      if (!std::filesystem::exists(image_path)) {
        violate("missing_file", entry.image);
      }
      if (!std::filesystem::exists(label_path)) {
        violate("missing_file", entry.label);
      } else {
        try {
          load_annotation_file(label_path, {1, 1});
        } catch (const Error& e) {
          violate("bad_label", entry.label + ": " + e.what());
        }
      }

      const std::string stem =
          std::filesystem::path(entry.image).stem().string();
      auto [it, inserted] = stem_to_split.emplace(stem, split);
      if (!inserted && it->second != split) {
        violate("split_overlap",
                stem + " appears in '" + it->second + "' and '" + split + "'");
      }
      const std::string source_key =
          entry.source ? std::filesystem::path(*entry.source).stem().string()
                       : stem;
      auto [sit, s_inserted] = source_to_split.emplace(source_key, split);
      if (!s_inserted && sit->second != split) {
        violate("leakage", "derivatives of '" + source_key +
                               "' span '" + sit->second + "' and '" + split +
                               "'");
      }
    }
  }

  const auto stats = composition_stats(manifest);
  for (const auto& [name, want] : manifest.requested) {
    auto it = stats.per_split.find(name);
    const SplitComposition got =
        it == stats.per_split.end() ? SplitComposition{} : it->second;
    if (std::abs(got.real - want.real) > 1 ||
        std::abs(got.augmented - want.augmented) > 1) {
      violate("composition",
              "split '" + name + "' has " + std::to_string(got.real) + "+" +
                  std::to_string(got.augmented) + " (real+augmented), spec " +
                  std::to_string(want.real) + "+" +
                  std::to_string(want.augmented));
    }
  }
  return report;
}

std::string to_json_string(const ValidationReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"type", v.type}, {"detail", v.detail}});
  }
  return nlohmann::json{{"schema_version", 1},
                        {"images_checked", report.images_checked},
                        {"violations", violations}}
      .dump(2);
}

CompositionStats composition_stats(const DatasetManifest& manifest) {
  CompositionStats stats;
  for (const auto& [split, entries] : manifest.splits) {
    SplitComposition comp;
    for (const auto& entry : entries) {
      if (is_real_domain(entry.domain)) {
        ++comp.real;
      } else {
        ++comp.augmented;
      }
    }
    if (comp.real + comp.augmented > 0) {
      comp.real_ratio = static_cast<double>(comp.real) /
                        static_cast<double>(comp.real + comp.augmented);
    }
    stats.overall.real += comp.real;
    stats.overall.augmented += comp.augmented;
    stats.per_split[split] = comp;
  }
  if (stats.overall.real + stats.overall.augmented > 0) {
    stats.overall.real_ratio =
        static_cast<double>(stats.overall.real) /
        static_cast<double>(stats.overall.real + stats.overall.augmented);
  }
  return stats;
}

std::vector<LabeledImage> load_labeled_pool(
    const std::filesystem::path& images_dir,
    const std::filesystem::path& labels_dir, Domain domain,
    const std::filesystem::path& translation_manifest) {
  std::map<std::string, std::filesystem::path> sources;
  if (!translation_manifest.empty()) {
    for (const auto& record :
         gan::load_translation_manifest(translation_manifest)) {
      if (record.source_of) {
        sources[record.path.stem().string()] = *record.source_of;
      }
    }
  }

  std::vector<std::filesystem::path> images;
  if (std::filesystem::exists(images_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(images_dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension().string();
      if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp") {
        images.push_back(entry.path());
      }
    }
  }
  std::sort(images.begin(), images.end());

  std::vector<LabeledImage> pool;
  for (const auto& image_path : images) {
    LabeledImage item;
    item.image.path = image_path;
    const auto [w, h] = probe_image_dims(image_path);
    item.image.width_px = w;
    item.image.height_px = h;
    item.image.domain = domain;
    if (domain == Domain::kNightTransferred) {
      auto it = sources.find(image_path.stem().string());
      if (it == sources.end()) {
        throw ValidationError("no provenance for transferred image: " +
                              image_path.string());
      }
      item.image.source_of = it->second;
    }
    validate_record(item.image);
    const auto label_path = labels_dir / (image_path.stem().string() + ".txt");
    if (std::filesystem::exists(label_path)) {
      item.annotations = load_annotation_file(label_path, {w, h});
    }
    pool.push_back(std::move(item));
  }
  return pool;
}

}  // namespace nightforge::dataset
