#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nightforge/core/geometry.hpp"
#include "nightforge/core/types.hpp"

namespace nightforge::eval {

/// Intersection over union of two corner boxes. Zero-area boxes score 0.
double iou(const PixelBox& a, const PixelBox& b);

/// A detector output on one image.
struct Prediction {
  int class_index = 0;
  double confidence = 0.0;
  BoundingBox box;
};

/// Predictions and ground truth for one image.
struct ImageSample {
  std::vector<Prediction> predictions;
  std::vector<Annotation> ground_truth;
};

/// Greedy confidence-ordered matching at one IoU threshold. Each ground
/// truth is matched at most once; a prediction takes the highest-IoU
/// unmatched same-class ground truth with IoU >= threshold (IoU ties break
/// toward the lower ground-truth index). Remaining predictions are false
/// positives.
struct MatchResult {
  std::vector<bool> true_positive;   // per prediction, input order
  std::vector<int> matched_gt;       // ground-truth index or -1
  int unmatched_ground_truth = 0;
};

MatchResult match(std::span<const Prediction> predictions,
                  std::span<const Annotation> ground_truth,
                  double iou_threshold);

/// 101-point interpolated average precision over a class-filtered corpus.
/// Returns nullopt when there are neither ground truths nor predictions
/// (undefined, excluded from class means); 0 when predictions exist but no
/// ground truth does.
std::optional<double> average_precision(const std::vector<ImageSample>& samples,
                                        double iou_threshold);

/// One row of a metrics table. Undefined metrics (empty class) are nullopt.
struct ClassMetrics {
  std::string name;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> map50;
  std::optional<double> map50_95;
  int n_ground_truth = 0;
  int n_predictions = 0;
};

struct MetricsTable {
  std::vector<ClassMetrics> classes;
  ClassMetrics all;              // unweighted mean over defined classes
  double f1_confidence = 0.0;    // operating point for precision/recall
};

/// Full two-class summary: per-class AP at IoU .50 and .50:.05:.95, plus
/// precision/recall at the confidence that maximizes mean F1 at IoU .50.
MetricsTable map_summary(const std::vector<ImageSample>& samples,
                         const std::vector<std::string>& class_names_by_index);

/// IoU thresholds used by the 50-95 column.
std::vector<double> coco_iou_thresholds();

}  // namespace nightforge::eval
