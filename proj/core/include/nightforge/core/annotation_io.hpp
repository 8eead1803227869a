#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nightforge/core/types.hpp"

namespace nightforge {

/// Parses label-file text: one annotation per non-empty line, five
/// whitespace-separated fields "class cx cy w h" in normalized coordinates.
/// Boxes are clamped into the unit square on load. Order is preserved.
///
/// Throws ParseError (naming the line) on malformed lines and
/// ValidationError when a class index is outside the two-class scheme.
std::vector<Annotation> parse_annotation_file(const std::string& text,
                                              std::pair<int, int> image_dims);

/// Serializes annotations in the same five-field format, fields printed at
/// six decimal places, one line per annotation, no trailing whitespace.
/// Confidence values are never persisted in label files.
std::string serialize_annotation_file(std::span<const Annotation> annotations);

std::vector<Annotation> load_annotation_file(const std::filesystem::path& path,
                                             std::pair<int, int> image_dims);

void write_annotation_file(const std::filesystem::path& path,
                           std::span<const Annotation> annotations);

/// Result of scanning a directory of label files for scheme conformance.
struct CorpusScanResult {
  int files_scanned = 0;
  int annotations_seen = 0;
  std::vector<std::string> violations;  // empty when the corpus conforms

  bool clean() const { return violations.empty(); }
};

/// Walks every .txt file under `labels_dir` and checks that each parses and
/// uses only the persisted two-class scheme. Violations are collected, not
/// thrown.
CorpusScanResult scan_label_corpus(const std::filesystem::path& labels_dir);

/// Conventional label path for an image: sibling labels/ tree with the same
/// stem. `images_root`/x/y.png -> `labels_root`/x/y.txt.
std::filesystem::path label_path_for_image(const std::filesystem::path& image_path,
                                           const std::filesystem::path& images_root,
                                           const std::filesystem::path& labels_root);

}  // namespace nightforge
