#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nightforge/autolabel/class_map.hpp"
#include "nightforge/autolabel/detector.hpp"
#include "nightforge/core/types.hpp"

namespace nightforge::autolabel {

inline constexpr double kDefaultConfThreshold = 0.25;

/// Runs the detector on one image and converts its raw detections into
/// persisted-scheme annotations: below-threshold and unmapped detections
/// are removed, survivors keep their confidence and are sorted by
/// descending confidence.
std::vector<Annotation> annotate(DetectorAdapter& detector,
                                 const ImageRecord& image,
                                 const ClassMap& map,
                                 double conf_threshold = kDefaultConfThreshold);

/// Copies a day image's annotations verbatim onto its style-transferred
/// counterpart. Throws ProvenanceError unless night_image.source_of names
/// day.image.path.
LabeledImage transfer_labels(const LabeledImage& day,
                             const ImageRecord& night_image);

/// Per-run counters for the corpus operation.
struct AutolabelReport {
  std::map<int, int> class_counts;            // persisted-scheme histogram
  std::map<std::string, int> detections_per_image;  // by day-image stem
  int dropped_below_threshold = 0;
  int dropped_unmapped = 0;
  std::vector<std::string> skipped;           // day stems without a translation
  double conf_threshold = kDefaultConfThreshold;
};

struct AutolabelResult {
  std::vector<LabeledImage> day_labeled;
  std::vector<LabeledImage> night_labeled;    // the augmented dataset
  AutolabelReport report;
};

/// Annotates every day image and transfers the labels onto its translated
/// partner (matched through source_of). Day images without a partner are
/// reported and skipped.
AutolabelResult autolabel_corpus(DetectorAdapter& detector,
                                 const std::vector<ImageRecord>& day_images,
                                 const std::vector<ImageRecord>& translated_images,
                                 const ClassMap& map,
                                 double conf_threshold = kDefaultConfThreshold);

std::string report_to_json(const AutolabelReport& report);
void write_report(const std::filesystem::path& path,
                  const AutolabelReport& report);

}  // namespace nightforge::autolabel
