#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace testsupport::oracle {

using nightforge::Annotation;
using nightforge::BoundingBox;
using nightforge::eval::ImageSample;
using nightforge::eval::MetricsTable;
using nightforge::eval::Prediction;
using nightforge::nn::Tensor;

Tensor dense_attention(const Tensor& queries, const Tensor& keys,
                       const Tensor& values) {
  const int batch = queries.dim(0);
  const int n = queries.dim(1);
  const int dk = queries.dim(2);
  const int dv = values.dim(2);
  Tensor out({batch, n, dv});

  for (int b = 0; b < batch; ++b) {
    auto q_at = [&](int i, int c) {
      return queries[(static_cast<std::int64_t>(b) * n + i) * dk + c];
    };
    auto k_at = [&](int j, int c) {
      return keys[(static_cast<std::int64_t>(b) * n + j) * dk + c];
    };
    auto v_at = [&](int j, int d) {
      return values[(static_cast<std::int64_t>(b) * n + j) * dv + d];
    };

    // softmax over channels for each query position
    std::vector<double> qn(static_cast<size_t>(n) * dk);
    for (int i = 0; i < n; ++i) {
      double mx = q_at(i, 0);
      for (int c = 1; c < dk; ++c) mx = std::max(mx, q_at(i, c));
      double z = 0.0;
      for (int c = 0; c < dk; ++c) z += std::exp(q_at(i, c) - mx);
      for (int c = 0; c < dk; ++c) {
        qn[static_cast<size_t>(i) * dk + c] = std::exp(q_at(i, c) - mx) / z;
      }
    }
    // softmax over positions for each key channel
    std::vector<double> kn(static_cast<size_t>(n) * dk);
    for (int c = 0; c < dk; ++c) {
      double mx = k_at(0, c);
      for (int j = 1; j < n; ++j) mx = std::max(mx, k_at(j, c));
      double z = 0.0;
      for (int j = 0; j < n; ++j) z += std::exp(k_at(j, c) - mx);
      for (int j = 0; j < n; ++j) {
        kn[static_cast<size_t>(j) * dk + c] = std::exp(k_at(j, c) - mx) / z;
      }
    }
    // full n x n attention matrix, then apply to values
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double a = 0.0;
        for (int c = 0; c < dk; ++c) {
          a += qn[static_cast<size_t>(i) * dk + c] *
               kn[static_cast<size_t>(j) * dk + c];
        }
        for (int d = 0; d < dv; ++d) {
          out[(static_cast<std::int64_t>(b) * n + i) * dv + d] +=
              a * v_at(j, d);
        }
      }
    }
  }
  return out;
}

namespace {

double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const double ax0 = a.cx - a.w / 2, ax1 = a.cx + a.w / 2;
  const double ay0 = a.cy - a.h / 2, ay1 = a.cy + a.h / 2;
  const double bx0 = b.cx - b.w / 2, bx1 = b.cx + b.w / 2;
  const double by0 = b.cy - b.h / 2, by1 = b.cy + b.h / 2;
  const double area_a = (ax1 - ax0) * (ay1 - ay0);
  const double area_b = (bx1 - bx0) * (by1 - by0);
  if (area_a <= 0 || area_b <= 0) return 0.0;
  const double iw = std::min(ax1, bx1) - std::max(ax0, bx0);
  const double ih = std::min(ay1, by1) - std::max(ay0, by0);
  if (iw <= 0 || ih <= 0) return 0.0;
  return iw * ih / (area_a + area_b - iw * ih);
}

struct Ranked {
  double conf;
  bool tp;
  size_t image;
  size_t index;
};

std::vector<Ranked> rank_all(const std::vector<ImageSample>& samples,
                             double thr) {
  std::vector<Ranked> ranked;
  for (size_t s = 0; s < samples.size(); ++s) {
    const auto m = greedy_match(samples[s].predictions,
                                samples[s].ground_truth, thr);
    for (size_t p = 0; p < samples[s].predictions.size(); ++p) {
      ranked.push_back(
          {samples[s].predictions[p].confidence, m.true_positive[p], s, p});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    if (a.image != b.image) return a.image < b.image;
    return a.index < b.index;
  });
  return ranked;
}

}  // namespace

OracleMatch greedy_match(const std::vector<Prediction>& preds,
                         const std::vector<Annotation>& gts,
                         double iou_threshold) {
  OracleMatch result;
  result.true_positive.assign(preds.size(), false);
  result.matched_gt.assign(preds.size(), -1);

  std::vector<size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });

  std::vector<bool> used(gts.size(), false);
  for (size_t rank : order) {
    double best = 0.0;
    int pick = -1;
    for (size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      if (gts[g].class_index != preds[rank].class_index) continue;
      const double overlap = box_iou(preds[rank].box, gts[g].box);
      if (overlap < iou_threshold) continue;
      if (overlap > best) {
        best = overlap;
        pick = static_cast<int>(g);
      }
    }
    if (pick >= 0) {
      used[static_cast<size_t>(pick)] = true;
      result.true_positive[rank] = true;
      result.matched_gt[rank] = pick;
    }
  }
  return result;
}

std::optional<double> average_precision(const std::vector<ImageSample>& samples,
                                        double iou_threshold) {
  size_t n_gt = 0, n_pred = 0;
  for (const auto& s : samples) {
    n_gt += s.ground_truth.size();
    n_pred += s.predictions.size();
  }
  if (n_gt == 0 && n_pred == 0) return std::nullopt;
  if (n_gt == 0 || n_pred == 0) return 0.0;

  const auto ranked = rank_all(samples, iou_threshold);
  std::vector<double> precision, recall;
  int tp = 0, fp = 0;
  for (const auto& r : ranked) {
    r.tp ? ++tp : ++fp;
    precision.push_back(static_cast<double>(tp) / (tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  double sum = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double target = i / 100.0;
    double best = 0.0;
    for (size_t k = 0; k < precision.size(); ++k) {
      if (recall[k] >= target) best = std::max(best, precision[k]);
    }
    sum += best;
  }
  return sum / 101.0;
}

MetricsTable map_summary(const std::vector<ImageSample>& samples,
                         const std::vector<std::string>& class_names) {
  using nightforge::eval::ClassMetrics;
  MetricsTable table;
  table.all.name = "all";

  std::vector<std::vector<ImageSample>> filtered(class_names.size());
  for (size_t c = 0; c < class_names.size(); ++c) {
    filtered[c].resize(samples.size());
    for (size_t s = 0; s < samples.size(); ++s) {
      for (const auto& p : samples[s].predictions) {
        if (p.class_index == static_cast<int>(c)) {
          filtered[c][s].predictions.push_back(p);
        }
      }
      for (const auto& g : samples[s].ground_truth) {
        if (g.class_index == static_cast<int>(c)) {
          filtered[c][s].ground_truth.push_back(g);
        }
      }
    }
  }

  std::vector<std::vector<Ranked>> ranked50(class_names.size());
  for (size_t c = 0; c < class_names.size(); ++c) {
    ClassMetrics row;
    row.name = class_names[c];
    for (const auto& s : filtered[c]) {
      row.n_ground_truth += static_cast<int>(s.ground_truth.size());
      row.n_predictions += static_cast<int>(s.predictions.size());
    }
    if (row.n_ground_truth > 0 || row.n_predictions > 0) {
      row.map50 = oracle::average_precision(filtered[c], 0.5);
      double acc = 0.0;
      for (int t = 0; t < 10; ++t) {
        acc += oracle::average_precision(filtered[c], 0.5 + 0.05 * t).value();
      }
      row.map50_95 = acc / 10.0;
      ranked50[c] = rank_all(filtered[c], 0.5);
    }
    table.classes.push_back(row);
  }

  std::vector<double> candidates;
  for (const auto& r : ranked50) {
    for (const auto& x : r) candidates.push_back(x.conf);
  }
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  double best_f1 = -1.0, best_conf = 0.0;
  for (double conf : candidates) {
    double f1_sum = 0.0;
    int defined = 0;
    for (size_t c = 0; c < class_names.size(); ++c) {
      const auto& row = table.classes[c];
      if (row.n_ground_truth == 0 && row.n_predictions == 0) continue;
      int tp = 0, kept = 0;
      for (const auto& r : ranked50[c]) {
        if (r.conf < conf) continue;
        ++kept;
        if (r.tp) ++tp;
      }
      const double p = kept ? static_cast<double>(tp) / kept : 0.0;
      const double rec =
          row.n_ground_truth ? static_cast<double>(tp) / row.n_ground_truth : 0.0;
      f1_sum += (p + rec) > 0 ? 2 * p * rec / (p + rec) : 0.0;
      ++defined;
    }
    if (!defined) continue;
    if (f1_sum / defined > best_f1) {
      best_f1 = f1_sum / defined;
      best_conf = conf;
    }
  }
  table.f1_confidence = best_conf;

  for (size_t c = 0; c < class_names.size(); ++c) {
    auto& row = table.classes[c];
    if (row.n_ground_truth == 0 && row.n_predictions == 0) continue;
    int tp = 0, kept = 0;
    for (const auto& r : ranked50[c]) {
      if (r.conf < best_conf) continue;
      ++kept;
      if (r.tp) ++tp;
    }
    row.precision = kept ? static_cast<double>(tp) / kept : 0.0;
    row.recall = row.n_ground_truth
                     ? static_cast<double>(tp) / row.n_ground_truth
                     : 0.0;
  }

  auto mean_of = [&](auto getter) -> std::optional<double> {
    double sum = 0.0;
    int n = 0;
    for (const auto& row : table.classes) {
      const auto v = getter(row);
      if (v) {
        sum += *v;
        ++n;
      }
    }
    if (!n) return std::nullopt;
    return sum / n;
  };
  for (const auto& row : table.classes) {
    table.all.n_ground_truth += row.n_ground_truth;
    table.all.n_predictions += row.n_predictions;
  }
  table.all.precision = mean_of([](const ClassMetrics& r) { return r.precision; });
  table.all.recall = mean_of([](const ClassMetrics& r) { return r.recall; });
  table.all.map50 = mean_of([](const ClassMetrics& r) { return r.map50; });
  table.all.map50_95 =
      mean_of([](const ClassMetrics& r) { return r.map50_95; });
  return table;
}

}  // namespace testsupport::oracle
