#include "nightforge/eval/compare.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge::eval {

namespace {

std::optional<double> delta(const std::optional<double>& a,
                            const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

std::string fmt(const std::optional<double>& v, const char* spec = "%.3f") {
  if (!v) return "-";
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, *v);
  return buf;
}

nlohmann::json metric_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::optional<double> metric_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

nlohmann::json row_json(const ClassMetrics& row) {
  return nlohmann::json{{"name", row.name},
                        {"precision", metric_json(row.precision)},
                        {"recall", metric_json(row.recall)},
                        {"map50", metric_json(row.map50)},
                        {"map50_95", metric_json(row.map50_95)},
                        {"n_ground_truth", row.n_ground_truth},
                        {"n_predictions", row.n_predictions}};
}

ClassMetrics row_from_json(const nlohmann::json& j) {
  ClassMetrics row;
  row.name = j.at("name").get<std::string>();
  row.precision = metric_from_json(j.at("precision"));
  row.recall = metric_from_json(j.at("recall"));
  row.map50 = metric_from_json(j.at("map50"));
  row.map50_95 = metric_from_json(j.at("map50_95"));
  row.n_ground_truth = j.value("n_ground_truth", 0);
  row.n_predictions = j.value("n_predictions", 0);
  return row;
}

}  // namespace

ComparisonReport compare(const MetricsTable& baseline,
                         const MetricsTable& candidate,
                         const std::map<std::string, std::string>& row_mapping) {
  auto mapped_name = [&](const std::string& name) {
    auto it = row_mapping.find(name);
    return it == row_mapping.end() ? name : it->second;
  };

  ComparisonReport report;
  for (const auto& cand_row : candidate.classes) {
    const ClassMetrics* base_row = nullptr;
    std::string base_name;
    for (const auto& row : baseline.classes) {
      if (mapped_name(row.name) == cand_row.name) {
        base_row = &row;
        base_name = row.name;
        break;
      }
    }
    if (!base_row) {
      throw ValidationError(
          "no baseline row aligns with class '" + cand_row.name +
          "'; provide a row mapping for mismatched class schemes");
    }
    ComparisonRow out;
    out.name = cand_row.name;
    out.baseline_name = base_name;
    out.baseline = *base_row;
    out.candidate = cand_row;
    out.delta_precision = delta(base_row->precision, cand_row.precision);
    out.delta_recall = delta(base_row->recall, cand_row.recall);
    out.delta_map50 = delta(base_row->map50, cand_row.map50);
    out.delta_map50_95 = delta(base_row->map50_95, cand_row.map50_95);
    report.rows.push_back(std::move(out));
  }
  ComparisonRow all;
  all.name = "all";
  all.baseline_name = "all";
  all.baseline = baseline.all;
  all.candidate = candidate.all;
  all.delta_precision = delta(baseline.all.precision, candidate.all.precision);
  all.delta_recall = delta(baseline.all.recall, candidate.all.recall);
  all.delta_map50 = delta(baseline.all.map50, candidate.all.map50);
  all.delta_map50_95 = delta(baseline.all.map50_95, candidate.all.map50_95);
  report.rows.push_back(std::move(all));
  return report;
}

std::string render_text(const MetricsTable& table) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %10s\n", "Class",
                "Precision", "Recall", "mAP50", "mAP50-95");
  out << line;
  auto print_row = [&](const ClassMetrics& row) {
    std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %10s\n",
                  row.name.c_str(), fmt(row.precision).c_str(),
                  fmt(row.recall).c_str(), fmt(row.map50).c_str(),
                  fmt(row.map50_95).c_str());
    out << line;
  };
  print_row(table.all);
  for (const auto& row : table.classes) print_row(row);
  std::snprintf(line, sizeof(line), "(operating confidence: %.4f)\n",
                table.f1_confidence);
  out << line;
  return out.str();
}

std::string render_text(const ComparisonReport& report) {
  std::ostringstream out;
  char line[320];
  std::snprintf(line, sizeof(line), "%-18s %-28s %-28s %-28s\n", "Class",
                "Precision (a/b/d)", "Recall (a/b/d)", "mAP50 (a/b/d)");
  out << line;
  for (const auto& row : report.rows) {
    const std::string name = row.baseline_name == row.name
                                 ? row.name
                                 : row.baseline_name + "->" + row.name;
    auto triple = [&](const std::optional<double>& a,
                      const std::optional<double>& b,
                      const std::optional<double>& d) {
      return fmt(a) + "/" + fmt(b) + "/" + fmt(d, "%+.3f");
    };
    std::snprintf(line, sizeof(line), "%-18s %-28s %-28s %-28s\n", name.c_str(),
                  triple(row.baseline.precision, row.candidate.precision,
                         row.delta_precision)
                      .c_str(),
                  triple(row.baseline.recall, row.candidate.recall,
                         row.delta_recall)
                      .c_str(),
                  triple(row.baseline.map50, row.candidate.map50, row.delta_map50)
                      .c_str());
    out << line;
  }
  return out.str();
}

std::string to_json_string(const MetricsTable& table) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& row : table.classes) classes.push_back(row_json(row));
  nlohmann::json doc{{"schema_version", 1},
                     {"classes", classes},
                     {"all", row_json(table.all)},
                     {"f1_confidence", table.f1_confidence}};
  return doc.dump(2);
}

MetricsTable metrics_table_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read metrics table: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid metrics JSON: " + std::string(e.what()));
  }
  MetricsTable table;
  for (const auto& j : doc.at("classes")) table.classes.push_back(row_from_json(j));
  table.all = row_from_json(doc.at("all"));
  table.f1_confidence = doc.value("f1_confidence", 0.0);
  return table;
}

void write_metrics_table(const std::filesystem::path& path,
                         const MetricsTable& table) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write metrics table: " + path.string());
  out << to_json_string(table) << "\n";
}

std::string to_json_string(const ComparisonReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"name", row.name},
                    {"baseline_name", row.baseline_name},
                    {"baseline", row_json(row.baseline)},
                    {"candidate", row_json(row.candidate)},
                    {"delta_precision", metric_json(row.delta_precision)},
                    {"delta_recall", metric_json(row.delta_recall)},
                    {"delta_map50", metric_json(row.delta_map50)},
                    {"delta_map50_95", metric_json(row.delta_map50_95)}});
  }
  return nlohmann::json{{"schema_version", 1}, {"rows", rows}}.dump(2);
}

void write_comparison_report(const std::filesystem::path& json_path,
                             const std::filesystem::path& text_path,
                             const ComparisonReport& report) {
  std::filesystem::create_directories(json_path.parent_path());
  std::ofstream json_out(json_path);
  if (!json_out) throw IoError("cannot write report: " + json_path.string());
  json_out << to_json_string(report) << "\n";
  std::ofstream text_out(text_path);
  if (!text_out) throw IoError("cannot write report: " + text_path.string());
  text_out << render_text(report);
}

}  // namespace nightforge::eval
