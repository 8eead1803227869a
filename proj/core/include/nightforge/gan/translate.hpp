#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nightforge/core/types.hpp"

namespace nightforge::gan {

struct TranslateFailure {
  std::filesystem::path path;
  std::string message;
};

struct TranslateReport {
  std::vector<ImageRecord> outputs;  // NIGHT_TRANSFERRED, source_of set
  std::vector<TranslateFailure> failures;
  std::filesystem::path manifest_path;
};

/// Translates day images to night with the checkpointed day->night
/// generator. Each output keeps its source's pixel dimensions (inference
/// runs at the model's input size, the result is resized back) and its
/// source's stem. Unreadable inputs are collected in the report and the
/// run continues. Deterministic: the same checkpoint and input produce
/// byte-identical output files.
TranslateReport translate(const std::filesystem::path& checkpoint_dir,
                          const std::vector<std::filesystem::path>& images,
                          const std::filesystem::path& out_dir);

/// Directory convenience: translates every image file directly under
/// `images_dir` in lexicographic order.
TranslateReport translate_directory(const std::filesystem::path& checkpoint_dir,
                                    const std::filesystem::path& images_dir,
                                    const std::filesystem::path& out_dir);

/// Loads the translation manifest written by translate().
std::vector<ImageRecord> load_translation_manifest(const std::filesystem::path& path);

}  // namespace nightforge::gan
