#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "nightforge/eval/metrics.hpp"

namespace nightforge::eval {

/// Side-by-side comparison of two metrics tables (baseline vs candidate)
/// with per-metric deltas (candidate - baseline).
struct ComparisonRow {
  std::string name;            // candidate-side row name
  std::string baseline_name;   // original baseline row name
  ClassMetrics baseline;
  ClassMetrics candidate;
  std::optional<double> delta_precision, delta_recall, delta_map50,
      delta_map50_95;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // per-class rows then "all"
};

/// Aligns rows by class name. `row_mapping` renames baseline rows into the
/// candidate's vocabulary (e.g. raw detector classes onto the persisted
/// scheme) before alignment; a mismatch without a covering mapping throws
/// ValidationError.
ComparisonReport compare(const MetricsTable& baseline,
                         const MetricsTable& candidate,
                         const std::map<std::string, std::string>& row_mapping = {});

std::string render_text(const MetricsTable& table);
std::string render_text(const ComparisonReport& report);

/// Structured forms with every number at full precision.
std::string to_json_string(const MetricsTable& table);
MetricsTable metrics_table_from_json_file(const std::filesystem::path& path);
void write_metrics_table(const std::filesystem::path& path,
                         const MetricsTable& table);
std::string to_json_string(const ComparisonReport& report);
void write_comparison_report(const std::filesystem::path& json_path,
                             const std::filesystem::path& text_path,
                             const ComparisonReport& report);

}  // namespace nightforge::eval
