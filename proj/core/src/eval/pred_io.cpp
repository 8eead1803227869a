#include "nightforge/eval/pred_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nightforge/core/annotation_io.hpp"
#include "nightforge/core/errors.hpp"

namespace nightforge::eval {

std::vector<Prediction> parse_prediction_file(const std::string& text) {
  std::vector<Prediction> predictions;
  std::istringstream lines(text);
  std::string line;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.empty()) continue;
    if (tokens.size() != 6) {
      throw ParseError("expected 6 fields, got " + std::to_string(tokens.size()),
                       line_number);
    }
    // Reuse the five-field parser for the shared prefix, then the score.
    std::string prefix = tokens[0];
    for (int i = 1; i < 5; ++i) prefix += " " + tokens[i];
    auto base = parse_annotation_file(prefix, {1, 1});
    double confidence = 0.0;
    try {
      size_t used = 0;
      confidence = std::stod(tokens[5], &used);
      if (used != tokens[5].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("confidence is not numeric: " + tokens[5], line_number);
    }
    if (confidence < 0.0 || confidence > 1.0) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": confidence outside [0,1]");
    }
    predictions.push_back({base[0].class_index, confidence, base[0].box});
  }
  return predictions;
}

std::string serialize_prediction_file(std::span<const Prediction> predictions) {
  std::string out;
  char buffer[160];
  for (size_t i = 0; i < predictions.size(); ++i) {
    const Prediction& p = predictions[i];
    std::snprintf(buffer, sizeof(buffer), "%d %.6f %.6f %.6f %.6f %.6f",
                  p.class_index, p.box.cx, p.box.cy, p.box.w, p.box.h,
                  p.confidence);
    if (i > 0) out += '\n';
    out += buffer;
  }
  return out;
}

std::vector<Prediction> load_prediction_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read prediction file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_prediction_file(buffer.str());
}

void write_prediction_file(const std::filesystem::path& path,
                           std::span<const Prediction> predictions) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write prediction file: " + path.string());
  out << serialize_prediction_file(predictions);
}

std::vector<ImageSample> load_eval_corpus(const std::filesystem::path& preds_dir,
                                          const std::filesystem::path& gts_dir) {
  auto collect = [](const std::filesystem::path& dir) {
    std::map<std::string, std::filesystem::path> by_stem;
    if (!std::filesystem::exists(dir)) return by_stem;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        by_stem[entry.path().stem().string()] = entry.path();
      }
    }
    return by_stem;
  };
  const auto preds = collect(preds_dir);
  const auto gts = collect(gts_dir);
  std::set<std::string> stems;
  for (const auto& [stem, _] : preds) stems.insert(stem);
  for (const auto& [stem, _] : gts) stems.insert(stem);

  std::vector<ImageSample> samples;
  for (const auto& stem : stems) {
    ImageSample sample;
    if (auto it = preds.find(stem); it != preds.end()) {
      sample.predictions = load_prediction_file(it->second);
    }
    if (auto it = gts.find(stem); it != gts.end()) {
      sample.ground_truth = load_annotation_file(it->second, {1, 1});
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace nightforge::eval
