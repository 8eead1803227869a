#include "nightforge/autolabel/autolabel.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge::autolabel {

std::vector<Annotation> annotate(DetectorAdapter& detector,
                                 const ImageRecord& image, const ClassMap& map,
                                 double conf_threshold) {
  std::vector<Detection> raw;
  try {
    raw = detector.detect(image);
  } catch (const Error& e) {
    throw Error("detector failed on " + image.path.string() + ": " + e.what());
  }
  std::vector<Annotation> annotations;
  for (const auto& det : raw) {
    if (det.confidence < conf_threshold) continue;
    const auto target = map.remap(det.class_id);
    if (!target) continue;
    Annotation a;
    a.class_index = *target;
    a.box = clamp_box_to_image(det.box);
    a.confidence = det.confidence;
    annotations.push_back(std::move(a));
  }
  std::stable_sort(annotations.begin(), annotations.end(),
                   [](const Annotation& a, const Annotation& b) {
                     return a.confidence.value() > b.confidence.value();
                   });
  return annotations;
}

LabeledImage transfer_labels(const LabeledImage& day,
                             const ImageRecord& night_image) {
  if (!night_image.source_of ||
      *night_image.source_of != day.image.path) {
    throw ProvenanceError(
        "night image " + night_image.path.string() +
        " was not derived from " + day.image.path.string());
  }
  return LabeledImage{night_image, day.annotations};
}

AutolabelResult autolabel_corpus(DetectorAdapter& detector,
                                 const std::vector<ImageRecord>& day_images,
                                 const std::vector<ImageRecord>& translated_images,
                                 const ClassMap& map, double conf_threshold) {
  AutolabelResult result;
  result.report.conf_threshold = conf_threshold;

  std::map<std::string, const ImageRecord*> translated_by_source;
  for (const auto& night : translated_images) {
    if (night.source_of) {
      translated_by_source[night.source_of->string()] = &night;
    }
  }

  for (const auto& day : day_images) {
    const std::string stem = day.path.stem().string();
    // Count drops per image before filtering so the loss stays observable.
    std::vector<Detection> raw = detector.detect(day);
    for (const auto& det : raw) {
      if (det.confidence < conf_threshold) {
        ++result.report.dropped_below_threshold;
      } else if (!map.maps(det.class_id)) {
        ++result.report.dropped_unmapped;
      }
    }
    auto annotations = annotate(detector, day, map, conf_threshold);
    result.report.detections_per_image[stem] =
        static_cast<int>(annotations.size());
    for (const auto& a : annotations) ++result.report.class_counts[a.class_index];

    LabeledImage labeled_day{day, std::move(annotations)};
    auto it = translated_by_source.find(day.path.string());
    if (it == translated_by_source.end()) {
      result.report.skipped.push_back(stem);
      result.day_labeled.push_back(std::move(labeled_day));
      continue;
    }
    result.night_labeled.push_back(transfer_labels(labeled_day, *it->second));
    result.day_labeled.push_back(std::move(labeled_day));
  }
  return result;
}

std::string report_to_json(const AutolabelReport& report) {
  nlohmann::json class_counts = nlohmann::json::object();
  for (const auto& [cls, count] : report.class_counts) {
    class_counts[std::to_string(cls)] = count;
  }
  nlohmann::json per_image = nlohmann::json::object();
  for (const auto& [stem, count] : report.detections_per_image) {
    per_image[stem] = count;
  }
  nlohmann::json doc{{"schema_version", 1},
                     {"conf_threshold", report.conf_threshold},
                     {"class_counts", class_counts},
                     {"detections_per_image", per_image},
                     {"dropped_below_threshold", report.dropped_below_threshold},
                     {"dropped_unmapped", report.dropped_unmapped},
                     {"skipped", report.skipped}};
  return doc.dump(2);
}

void write_report(const std::filesystem::path& path,
                  const AutolabelReport& report) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write autolabel report: " + path.string());
  out << report_to_json(report) << "\n";
}

}  // namespace nightforge::autolabel
