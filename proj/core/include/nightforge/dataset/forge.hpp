#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nightforge/core/types.hpp"
#include "nightforge/dataset/manifest.hpp"
#include "nightforge/dataset/mix_spec.hpp"

namespace nightforge::dataset {

/// Assembles a fine-tuning corpus from a real and an augmented labeled
/// pool per the mix spec, materializing out_root/{images,labels}/{split}/
/// plus manifest.json and dataset.yaml.
///
/// Deterministic under spec.seed. Split sizes and real/augmented
/// composition are exact; every derivative of one daytime source lands in
/// a single split so transferred val/test images never have train-split
/// siblings. Throws ConfigError naming the shortfall when a pool is too
/// small and ValidationError on duplicate stems.
DatasetManifest assemble(const std::vector<LabeledImage>& real_pool,
                         const std::vector<LabeledImage>& augmented_pool,
                         const MixSpec& spec,
                         const std::filesystem::path& out_root);

struct Violation {
  std::string type;    // missing_file | bad_label | split_overlap |
                       // leakage | composition | structure
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  int images_checked = 0;
  bool clean() const { return violations.empty(); }
};

std::string to_json_string(const ValidationReport& report);

/// Re-checks a manifest on disk: file existence, label parseability and
/// class-scheme conformance, split disjointness, source-leakage, and
/// composition within one image of the recorded request. Violations are
/// collected, never thrown.
ValidationReport validate(const DatasetManifest& manifest);

struct SplitComposition {
  int real = 0;
  int augmented = 0;
  std::optional<double> real_ratio;  // nullopt for an empty split
};

struct CompositionStats {
  std::map<std::string, SplitComposition> per_split;
  SplitComposition overall;
};

CompositionStats composition_stats(const DatasetManifest& manifest);

/// Loads a labeled pool from an images directory and a sibling labels
/// directory (missing label file -> negative image). Provenance for
/// transferred pools comes from the translation manifest when given.
std::vector<LabeledImage> load_labeled_pool(
    const std::filesystem::path& images_dir,
    const std::filesystem::path& labels_dir, Domain domain,
    const std::filesystem::path& translation_manifest = {});

}  // namespace nightforge::dataset
