#include "nightforge/core/annotation_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nightforge/core/errors.hpp"

namespace nightforge {
namespace {

bool parse_double(const std::string& token, double& out) {
  try {
    size_t used = 0;
    out = std::stod(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_int(const std::string& token, int& out) {
  try {
    size_t used = 0;
    out = std::stoi(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<Annotation> parse_annotation_file(const std::string& text,
                                              std::pair<int, int> image_dims) {
  if (image_dims.first <= 0 || image_dims.second <= 0) {
    throw ValidationError("image dimensions must be positive");
  }
  std::vector<Annotation> annotations;
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
    if (tokens.size() != 5) {
      throw ParseError("expected 5 fields, got " + std::to_string(tokens.size()),
                       line_number);
    }
    int class_index = 0;
    if (!parse_int(tokens[0], class_index)) {
      throw ParseError("class index is not an integer: " + tokens[0],
                       line_number);
    }
    BoundingBox box;
    double* slots[4] = {&box.cx, &box.cy, &box.w, &box.h};
    for (int i = 0; i < 4; ++i) {
      if (!parse_double(tokens[i + 1], *slots[i])) {
        throw ParseError("field " + std::to_string(i + 2) +
                             " is not numeric: " + tokens[i + 1],
                         line_number);
      }
    }
    if (class_index != kClassSedan && class_index != kClassSvpBv) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": class index outside the two-class scheme: " +
                            std::to_string(class_index));
    }
    if (!(box.w > 0.0) || !(box.h > 0.0)) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": box has non-positive extent");
    }
    annotations.push_back(Annotation{class_index, clamp_box_to_image(box), {}});
  }
  return annotations;
}

std::string serialize_annotation_file(std::span<const Annotation> annotations) {
  std::string out;
  char buffer[128];
  for (size_t i = 0; i < annotations.size(); ++i) {
    const Annotation& a = annotations[i];
    std::snprintf(buffer, sizeof(buffer), "%d %.6f %.6f %.6f %.6f",
                  a.class_index, a.box.cx, a.box.cy, a.box.w, a.box.h);
    if (i > 0) out += '\n';
    out += buffer;
  }
  return out;
}

std::vector<Annotation> load_annotation_file(const std::filesystem::path& path,
                                             std::pair<int, int> image_dims) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read label file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_annotation_file(buffer.str(), image_dims);
}

void write_annotation_file(const std::filesystem::path& path,
                           std::span<const Annotation> annotations) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write label file: " + path.string());
  out << serialize_annotation_file(annotations);
}

CorpusScanResult scan_label_corpus(const std::filesystem::path& labels_dir) {
  CorpusScanResult result;
  if (!std::filesystem::exists(labels_dir)) {
    result.violations.push_back("labels directory missing: " +
                                labels_dir.string());
    return result;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(labels_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    ++result.files_scanned;
    try {
      const auto annotations = load_annotation_file(file, {1, 1});
      result.annotations_seen += static_cast<int>(annotations.size());
    } catch (const Error& e) {
      result.violations.push_back(file.string() + ": " + e.what());
    }
  }
  return result;
}

std::filesystem::path label_path_for_image(
    const std::filesystem::path& image_path,
    const std::filesystem::path& images_root,
    const std::filesystem::path& labels_root) {
  auto relative = std::filesystem::relative(image_path, images_root);
  relative.replace_extension(".txt");
  return labels_root / relative;
}

}  // namespace nightforge
