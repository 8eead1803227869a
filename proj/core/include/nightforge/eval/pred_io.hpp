#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nightforge/eval/metrics.hpp"

namespace nightforge::eval {

/// Parses a prediction file: the label format plus a sixth confidence
/// column, "class cx cy w h conf". Throws ParseError / ValidationError
/// like the label parser.
std::vector<Prediction> parse_prediction_file(const std::string& text);

std::string serialize_prediction_file(std::span<const Prediction> predictions);

std::vector<Prediction> load_prediction_file(const std::filesystem::path& path);

void write_prediction_file(const std::filesystem::path& path,
                           std::span<const Prediction> predictions);

/// Pairs prediction and ground-truth files by stem across two directories.
/// A stem present on only one side contributes an empty list on the other.
/// Returns samples in lexicographic stem order.
std::vector<ImageSample> load_eval_corpus(const std::filesystem::path& preds_dir,
                                          const std::filesystem::path& gts_dir);

}  // namespace nightforge::eval
