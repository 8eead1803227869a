#include "nightforge/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nightforge/core/errors.hpp"

namespace nightforge::eval {

double iou(const PixelBox& a, const PixelBox& b) {
  const double area_a = a.area();
  const double area_b = b.area();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (area_a + area_b - inter);
}

namespace {

PixelBox corners(const BoundingBox& box) {
  return PixelBox{box.cx - box.w / 2.0, box.cy - box.h / 2.0,
                  box.cx + box.w / 2.0, box.cy + box.h / 2.0};
}

std::vector<size_t> confidence_order(std::span<const Prediction> predictions) {
  std::vector<size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return predictions[a].confidence > predictions[b].confidence;
  });
  return order;
}

}  // namespace

MatchResult match(std::span<const Prediction> predictions,
                  std::span<const Annotation> ground_truth,
                  double iou_threshold) {
  MatchResult result;
  result.true_positive.assign(predictions.size(), false);
  result.matched_gt.assign(predictions.size(), -1);
  std::vector<bool> gt_taken(ground_truth.size(), false);

  for (size_t rank : confidence_order(predictions)) {
    const Prediction& pred = predictions[rank];
    const PixelBox pred_box = corners(pred.box);
    double best_iou = 0.0;
    int best_gt = -1;
    for (size_t g = 0; g < ground_truth.size(); ++g) {
      if (gt_taken[g] || ground_truth[g].class_index != pred.class_index) {
        continue;
      }
      const double overlap = iou(pred_box, corners(ground_truth[g].box));
      if (overlap >= iou_threshold && overlap > best_iou) {
        best_iou = overlap;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      gt_taken[static_cast<size_t>(best_gt)] = true;
      result.true_positive[rank] = true;
      result.matched_gt[rank] = best_gt;
    }
  }
  result.unmatched_ground_truth = static_cast<int>(
      std::count(gt_taken.begin(), gt_taken.end(), false));
  return result;
}

namespace {

struct RankedPrediction {
  double confidence;
  bool true_positive;
  size_t image_index;
  size_t pred_index;
};

/// Flattens per-image match flags into one confidence-ranked sequence.
std::vector<RankedPrediction> ranked_predictions(
    const std::vector<ImageSample>& samples, double iou_threshold) {
  std::vector<RankedPrediction> ranked;
  for (size_t i = 0; i < samples.size(); ++i) {
    const MatchResult m =
        match(samples[i].predictions, samples[i].ground_truth, iou_threshold);
    for (size_t p = 0; p < samples[i].predictions.size(); ++p) {
      ranked.push_back({samples[i].predictions[p].confidence,
                        m.true_positive[p], i, p});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedPrediction& a, const RankedPrediction& b) {
                     if (a.confidence != b.confidence) {
                       return a.confidence > b.confidence;
                     }
                     if (a.image_index != b.image_index) {
                       return a.image_index < b.image_index;
                     }
                     return a.pred_index < b.pred_index;
                   });
  return ranked;
}

int count_ground_truth(const std::vector<ImageSample>& samples) {
  int n = 0;
  for (const auto& s : samples) n += static_cast<int>(s.ground_truth.size());
  return n;
}

int count_predictions(const std::vector<ImageSample>& samples) {
  int n = 0;
  for (const auto& s : samples) n += static_cast<int>(s.predictions.size());
  return n;
}

}  // namespace

std::optional<double> average_precision(const std::vector<ImageSample>& samples,
                                        double iou_threshold) {
  const int n_gt = count_ground_truth(samples);
  const int n_pred = count_predictions(samples);
  if (n_gt == 0 && n_pred == 0) return std::nullopt;
  if (n_gt == 0) return 0.0;
  if (n_pred == 0) return 0.0;

  const auto ranked = ranked_predictions(samples, iou_threshold);
  std::vector<double> recall(ranked.size()), precision(ranked.size());
  int tp = 0;
  for (size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].true_positive) ++tp;
    recall[i] = static_cast<double>(tp) / n_gt;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  // Right-max precision envelope, sampled at 101 recall points.
  std::vector<double> envelope(precision);
  for (size_t i = envelope.size(); i-- > 1;) {
    envelope[i - 1] = std::max(envelope[i - 1], envelope[i]);
  }
  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double target = static_cast<double>(r) / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), target);
    if (it != recall.end()) {
      sum += envelope[static_cast<size_t>(it - recall.begin())];
    }
  }
  return sum / 101.0;
}

std::vector<double> coco_iou_thresholds() {
  std::vector<double> thresholds;
  for (int i = 0; i < 10; ++i) thresholds.push_back(0.5 + 0.05 * i);
  return thresholds;
}

namespace {

std::vector<ImageSample> filter_class(const std::vector<ImageSample>& samples,
                                      int class_index) {
  std::vector<ImageSample> filtered(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    for (const auto& p : samples[i].predictions) {
      if (p.class_index == class_index) filtered[i].predictions.push_back(p);
    }
    for (const auto& g : samples[i].ground_truth) {
      if (g.class_index == class_index) filtered[i].ground_truth.push_back(g);
    }
  }
  return filtered;
}

std::optional<double> mean_defined(std::vector<std::optional<double>> values) {
  double sum = 0.0;
  int n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

MetricsTable map_summary(const std::vector<ImageSample>& samples,
                         const std::vector<std::string>& class_names_by_index) {
  MetricsTable table;
  table.all.name = "all";
  const int n_classes = static_cast<int>(class_names_by_index.size());
  const auto thresholds = coco_iou_thresholds();

  struct PerClass {
    std::vector<ImageSample> filtered;
    std::vector<RankedPrediction> ranked50;
    bool defined = false;
  };
  std::vector<PerClass> per_class(static_cast<size_t>(n_classes));

  for (int c = 0; c < n_classes; ++c) {
    auto& pc = per_class[static_cast<size_t>(c)];
    pc.filtered = filter_class(samples, c);
    ClassMetrics row;
    row.name = class_names_by_index[static_cast<size_t>(c)];
    row.n_ground_truth = count_ground_truth(pc.filtered);
    row.n_predictions = count_predictions(pc.filtered);
    pc.defined = row.n_ground_truth > 0 || row.n_predictions > 0;
    if (pc.defined) {
      row.map50 = average_precision(pc.filtered, 0.5);
      double sum = 0.0;
      for (double t : thresholds) sum += average_precision(pc.filtered, t).value();
      row.map50_95 = sum / static_cast<double>(thresholds.size());
      pc.ranked50 = ranked_predictions(pc.filtered, 0.5);
    }
    table.classes.push_back(std::move(row));
  }

  // Operating point: the confidence threshold maximizing mean F1 at IoU .50
  // across defined classes. Candidates are the observed confidences.
  std::vector<double> candidates;
  for (const auto& pc : per_class) {
    for (const auto& r : pc.ranked50) candidates.push_back(r.confidence);
  }
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  double best_f1 = -1.0;
  double best_conf = 0.0;
  for (double conf : candidates) {
    double f1_sum = 0.0;
    int f1_n = 0;
    for (int c = 0; c < n_classes; ++c) {
      const auto& pc = per_class[static_cast<size_t>(c)];
      if (!pc.defined) continue;
      int tp = 0, kept = 0;
      for (const auto& r : pc.ranked50) {
        if (r.confidence < conf) break;
        ++kept;
        if (r.true_positive) ++tp;
      }
      const int n_gt = table.classes[static_cast<size_t>(c)].n_ground_truth;
      const double p = kept > 0 ? static_cast<double>(tp) / kept : 0.0;
      const double r = n_gt > 0 ? static_cast<double>(tp) / n_gt : 0.0;
      f1_sum += (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
      ++f1_n;
    }
    if (f1_n == 0) continue;
    const double f1 = f1_sum / f1_n;
    if (f1 > best_f1) {
      best_f1 = f1;
      best_conf = conf;
    }
  }
  table.f1_confidence = best_conf;

  for (int c = 0; c < n_classes; ++c) {
    const auto& pc = per_class[static_cast<size_t>(c)];
    auto& row = table.classes[static_cast<size_t>(c)];
    if (!pc.defined) continue;
    int tp = 0, kept = 0;
    for (const auto& r : pc.ranked50) {
      if (r.confidence < best_conf) break;
      ++kept;
      if (r.true_positive) ++tp;
    }
    row.precision = kept > 0 ? static_cast<double>(tp) / kept : 0.0;
    row.recall = row.n_ground_truth > 0
                     ? static_cast<double>(tp) / row.n_ground_truth
                     : 0.0;
  }

  std::vector<std::optional<double>> p, r, m50, m5095;
  for (const auto& row : table.classes) {
    table.all.n_ground_truth += row.n_ground_truth;
    table.all.n_predictions += row.n_predictions;
    p.push_back(row.precision);
    r.push_back(row.recall);
    m50.push_back(row.map50);
    m5095.push_back(row.map50_95);
  }
  table.all.precision = mean_defined(p);
  table.all.recall = mean_defined(r);
  table.all.map50 = mean_defined(m50);
  table.all.map50_95 = mean_defined(m5095);
  return table;
}

}  // namespace nightforge::eval
