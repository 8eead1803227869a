#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nightforge/autolabel/autolabel.hpp"
#include "nightforge/autolabel/mock_detector.hpp"
#include "nightforge/core/annotation_io.hpp"
#include "nightforge/core/errors.hpp"
#include "nightforge/core/image.hpp"
#include "nightforge/dataset/forge.hpp"
#include "nightforge/eval/compare.hpp"
#include "nightforge/eval/pred_io.hpp"
#include "nightforge/finetune/runner.hpp"
#include "nightforge/gan/trainer.hpp"
#include "nightforge/gan/translate.hpp"
#include "nightforge/scenegen/capture.hpp"

namespace nightforge::cli {

namespace fs = std::filesystem;

void log(const std::string& message) {
  std::cerr << "[nightforge] " << message << "\n";
}

namespace {

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension().string();
      if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp") {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<ImageRecord> day_records(const fs::path& dir) {
  std::vector<ImageRecord> records;
  for (const auto& path : list_images(dir)) {
    ImageRecord r;
    r.path = path;
    const auto [w, h] = probe_image_dims(path);
    r.width_px = w;
    r.height_px = h;
    r.domain = Domain::kDayReal;
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ConfigError("no day images found in " + dir.string());
  return records;
}

}  // namespace

int cmd_scenegen(RunConfig& cfg, const fs::path& out_dir,
                 int frames_per_scenario_flag, int target_pool,
                 int frame_size) {
  cfg.write_run_manifest(out_dir, "scenegen");
  scenegen::MatrixConfig axes;  // capture dichotomies by default
  const auto matrix = scenegen::scenario_matrix(axes);
  int frames = frames_per_scenario_flag;
  if (frames <= 0) {
    frames = scenegen::frames_per_scenario(
        target_pool > 0 ? target_pool : 413, static_cast<int>(matrix.size()));
  }
  scenegen::CaptureOptions options;
  options.frame_width = frame_size;
  options.frame_height = frame_size;
  options.seed = cfg.seed();
  // precedence: config < flags (already folded into cfg) < environment
  if (cfg.has("simulator.host")) {
    options.host = cfg.at("simulator.host").get<std::string>();
  }
  if (cfg.has("simulator.port")) options.port = cfg.at("simulator.port").get<int>();
  if (const char* env = std::getenv("NIGHTFORGE_SIM_HOST")) options.host = env;
  if (const char* env = std::getenv("NIGHTFORGE_SIM_PORT")) {
    options.port = std::atoi(env);
  }

  auto sim = cfg.make_simulator();
  int total = 0;
  for (const auto& scenario : matrix) {
    const auto records = scenegen::capture(*sim, scenario, frames, out_dir, options);
    total += static_cast<int>(records.size());
    log("captured " + std::to_string(records.size()) + " frames for " +
        scenario.slug());
  }
  log("night pool: " + std::to_string(total) + " frames across " +
      std::to_string(matrix.size()) + " scenarios");
  std::cout << (out_dir / "images").string() << "\n";
  return 0;
}

int cmd_train_style(RunConfig& cfg, const fs::path& day_dir,
                    const fs::path& night_dir, const fs::path& out_dir) {
  cfg.write_run_manifest(out_dir, "train-style");
  const auto train_cfg = cfg.train_config();
  const auto model_cfg = cfg.model_config();
  log("training style-transfer model for " +
      std::to_string(train_cfg.total_epochs()) + " epochs");
  const auto result =
      gan::train(train_cfg, model_cfg, day_dir, night_dir, out_dir);
  log("loss log: " + result.loss_log.string());
  std::cout << result.final_checkpoint.string() << "\n";
  return 0;
}

int cmd_translate(RunConfig& cfg, const fs::path& checkpoint,
                  const fs::path& images_dir, const fs::path& out_dir) {
  cfg.write_run_manifest(out_dir, "translate");
  const auto report = gan::translate_directory(checkpoint, images_dir, out_dir);
  log("translated " + std::to_string(report.outputs.size()) + " images, " +
      std::to_string(report.failures.size()) + " failures");
  for (const auto& failure : report.failures) {
    log("  failed: " + failure.path.string() + " (" + failure.message + ")");
  }
  std::cout << report.manifest_path.string() << "\n";
  return 0;
}

int cmd_autolabel(RunConfig& cfg, const fs::path& day_dir,
                  const fs::path& translated_dir, const fs::path& out_dir,
                  double conf_threshold) {
  cfg.write_run_manifest(out_dir, "autolabel");
  const auto day = day_records(day_dir);
  const auto translated = gan::load_translation_manifest(
      translated_dir / "translation_manifest.json");
  auto detector = cfg.make_detector();
  const auto map = autolabel::default_class_map();
  const auto result = autolabel::autolabel_corpus(*detector, day, translated,
                                                  map, conf_threshold);
  for (const auto& labeled : result.night_labeled) {
    write_annotation_file(
        out_dir / "labels" / (labeled.image.path.stem().string() + ".txt"),
        labeled.annotations);
  }
  autolabel::write_report(out_dir / "autolabel_report.json", result.report);
  log("labeled " + std::to_string(result.night_labeled.size()) +
      " transferred images (" + std::to_string(result.report.skipped.size()) +
      " skipped)");
  std::cout << (out_dir / "autolabel_report.json").string() << "\n";
  return 0;
}

int cmd_assemble(RunConfig& cfg, const fs::path& real_images,
                 const fs::path& real_labels, const fs::path& augmented_images,
                 const fs::path& augmented_labels,
                 const fs::path& translation_manifest,
                 const std::string& mix_flag, const fs::path& out_dir) {
  cfg.write_run_manifest(out_dir, "assemble");
  const auto real = dataset::load_labeled_pool(real_images, real_labels,
                                               Domain::kNightReal);
  const auto augmented =
      dataset::load_labeled_pool(augmented_images, augmented_labels,
                                 Domain::kNightTransferred, translation_manifest);
  dataset::MixSpec spec;
  if (!mix_flag.empty()) {
    spec = dataset::mix_spec_from_json_file(mix_flag);
  } else {
    spec = cfg.mix_spec();
  }
  const auto manifest = dataset::assemble(real, augmented, spec, out_dir);
  const auto report = dataset::validate(manifest);
  std::ofstream(out_dir / "validation.json") << dataset::to_json_string(report)
                                             << "\n";
  const auto stats = dataset::composition_stats(manifest);
  for (const auto& [split, comp] : stats.per_split) {
    log("split " + split + ": " + std::to_string(comp.real) + " real + " +
        std::to_string(comp.augmented) + " augmented");
  }
  if (!report.clean()) {
    throw ValidationError("freshly assembled manifest failed validation (" +
                          std::to_string(report.violations.size()) +
                          " violations; see validation.json)");
  }
  std::cout << (out_dir / "manifest.json").string() << "\n";
  return 0;
}

int cmd_finetune(RunConfig& cfg, const fs::path& manifest_path,
                 const std::string& plan_flag, const fs::path& out_dir) {
  cfg.write_run_manifest(out_dir, "finetune");
  const auto manifest = dataset::load_manifest(manifest_path);
  auto adapter = cfg.make_detector(cfg.has("detector.model"));
  finetune::StagePlan plan;
  if (plan_flag.empty() || plan_flag == "default") {
    plan = finetune::default_stage_plan();
  } else if (plan_flag == "default-exclusive") {
    plan = finetune::default_stage_plan(finetune::StagePlanMode::kExclusiveBlocks);
  } else {
    plan = finetune::stage_plan_from_json_file(plan_flag);
  }
  finetune::validate(plan, adapter->list_blocks());
  const auto result = finetune::run(*adapter, manifest, plan, out_dir);
  for (const auto& row : result.stage_log) {
    log("stage " + std::to_string(row.stage) + ": val mAP50 = " +
        (row.val_map50 ? std::to_string(*row.val_map50) : std::string("n/a")));
  }
  std::cout << result.final_artifact.string() << "\n";
  return 0;
}

int cmd_evaluate(RunConfig& cfg, const fs::path& preds_dir,
                 const fs::path& gts_dir, const fs::path& out_dir) {
  cfg.write_run_manifest(out_dir, "evaluate");
  const auto samples = eval::load_eval_corpus(preds_dir, gts_dir);
  if (samples.empty()) {
    throw ConfigError("no prediction or label files under the given dirs");
  }
  const auto table = eval::map_summary(samples, class_names());
  eval::write_metrics_table(out_dir / "metrics.json", table);
  std::ofstream(out_dir / "metrics.txt") << eval::render_text(table);
  log("\n" + eval::render_text(table));
  std::cout << (out_dir / "metrics.json").string() << "\n";
  return 0;
}

int cmd_compare(RunConfig& cfg, const fs::path& baseline,
                const fs::path& candidate, const std::string& map_rows,
                const fs::path& out_dir) {
  cfg.write_run_manifest(out_dir, "compare");
  std::map<std::string, std::string> mapping;
  std::istringstream pairs(map_rows);
  std::string pair;
  while (std::getline(pairs, pair, ',')) {
    if (pair.empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("bad --map-rows entry (want from=to): " + pair);
    }
    mapping[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  const auto a = eval::metrics_table_from_json_file(baseline);
  const auto b = eval::metrics_table_from_json_file(candidate);
  const auto report = eval::compare(a, b, mapping);
  fs::create_directories(out_dir);
  eval::write_comparison_report(out_dir / "comparison_report.json",
                                out_dir / "comparison_report.txt", report);
  log("\n" + eval::render_text(report));
  std::cout << (out_dir / "comparison_report.json").string() << "\n";
  return 0;
}

namespace {

bool stage_done(const fs::path& out_dir, const std::string& stage) {
  return fs::exists(out_dir / (".done_" + stage));
}

void mark_done(const fs::path& out_dir, const std::string& stage) {
  std::ofstream(out_dir / (".done_" + stage)) << "ok\n";
}

/// Detects every image of one manifest split, writing per-image prediction
/// files; raw-vocabulary detections are remapped through the default class
/// map so raw and fine-tuned runs are measured in the same space.
std::vector<eval::ImageSample> detect_split(
    autolabel::DetectorAdapter& adapter, const dataset::DatasetManifest& manifest,
    const std::string& split, bool remap_raw, const fs::path& preds_out) {
  const auto* entries = manifest.split(split);
  if (!entries) throw ConfigError("manifest lacks split: " + split);
  const auto map = autolabel::default_class_map();
  std::vector<eval::ImageSample> samples;
  for (const auto& entry : *entries) {
    ImageRecord record;
    record.path = manifest.resolve(entry.image);
    record.width_px = 1;
    record.height_px = 1;
    record.domain = entry.domain;
    if (entry.source) record.source_of = entry.source;
    eval::ImageSample sample;
    std::vector<eval::Prediction> file_preds;
    for (const auto& det : adapter.detect(record)) {
      int class_index = det.class_id;
      if (remap_raw) {
        const auto target = map.remap(det.class_id);
        if (!target) continue;
        class_index = *target;
      }
      sample.predictions.push_back({class_index, det.confidence, det.box});
    }
    eval::write_prediction_file(
        preds_out / (record.path.stem().string() + ".txt"), sample.predictions);
    const auto label_path = manifest.resolve(entry.label);
    if (fs::exists(label_path)) {
      sample.ground_truth = load_annotation_file(label_path, {1, 1});
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace

int cmd_pipeline(RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  cfg.write_run_manifest(out_dir, "pipeline");

  const auto translate_out = out_dir / "translate";
  const auto autolabel_out = out_dir / "autolabel";
  const auto dataset_out = out_dir / "dataset";
  const auto finetune_out = out_dir / "finetune";
  const auto evaluate_out = out_dir / "evaluate";

  // 1. translate
  if (stage_done(out_dir, "translate")) {
    log("translate: already complete, resuming past it");
  } else {
    const auto report = gan::translate_directory(
        cfg.path_at("paths.style_checkpoint"), cfg.path_at("paths.day_pool"),
        translate_out);
    log("translate: " + std::to_string(report.outputs.size()) + " images");
    mark_done(out_dir, "translate");
  }

  // 2. autolabel
  if (stage_done(out_dir, "autolabel")) {
    log("autolabel: already complete, resuming past it");
  } else {
    const auto day = day_records(cfg.path_at("paths.day_pool"));
    const auto translated = gan::load_translation_manifest(
        translate_out / "translation_manifest.json");
    auto detector = cfg.make_detector();
    const auto result = autolabel::autolabel_corpus(
        *detector, day, translated, autolabel::default_class_map(),
        cfg.conf_threshold());
    for (const auto& labeled : result.night_labeled) {
      write_annotation_file(
          autolabel_out / "labels" / (labeled.image.path.stem().string() + ".txt"),
          labeled.annotations);
    }
    autolabel::write_report(autolabel_out / "autolabel_report.json",
                            result.report);
    log("autolabel: " + std::to_string(result.night_labeled.size()) +
        " labeled transfers");
    mark_done(out_dir, "autolabel");
  }

  // 3. assemble
  if (stage_done(out_dir, "assemble")) {
    log("assemble: already complete, resuming past it");
  } else {
    const auto real = dataset::load_labeled_pool(
        cfg.path_at("paths.real_night_images"),
        cfg.path_at("paths.real_night_labels"), Domain::kNightReal);
    const auto augmented = dataset::load_labeled_pool(
        translate_out / "images", autolabel_out / "labels",
        Domain::kNightTransferred, translate_out / "translation_manifest.json");
    const auto manifest =
        dataset::assemble(real, augmented, cfg.mix_spec(), dataset_out);
    const auto report = dataset::validate(manifest);
    std::ofstream(dataset_out / "validation.json")
        << dataset::to_json_string(report) << "\n";
    if (!report.clean()) {
      throw ValidationError("assembled dataset failed validation");
    }
    log("assemble: " + std::to_string(manifest.total_images()) + " images");
    mark_done(out_dir, "assemble");
  }

  // 4. finetune
  if (stage_done(out_dir, "finetune")) {
    log("finetune: already complete, resuming past it");
  } else {
    const auto manifest = dataset::load_manifest(dataset_out / "manifest.json");
    auto adapter = cfg.make_detector(cfg.has("detector.model"));
    const auto plan = cfg.stage_plan(adapter->list_blocks());
    const auto result = finetune::run(*adapter, manifest, plan, finetune_out);
    log("finetune: best stage " + std::to_string(result.best_stage));
    mark_done(out_dir, "finetune");
  }

  // 5. evaluate: original adapter vs fine-tuned artifact on the test split
  if (stage_done(out_dir, "evaluate")) {
    log("evaluate: already complete, resuming past it");
  } else {
    const auto manifest = dataset::load_manifest(dataset_out / "manifest.json");
    const auto map = autolabel::default_class_map();

    auto raw = cfg.make_detector();
    const auto raw_samples = detect_split(*raw, manifest, "test", true,
                                          evaluate_out / "predictions_raw");
    const std::vector<std::string> raw_names = {
        map.source_name(0).value_or("class0"),
        map.source_name(1).value_or("class1")};
    const auto raw_table = eval::map_summary(raw_samples, raw_names);
    eval::write_metrics_table(evaluate_out / "metrics_raw.json", raw_table);

    auto tuned = cfg.make_detector();
    tuned->load(finetune_out / "model_final.json");
    const auto tuned_samples = detect_split(*tuned, manifest, "test", false,
                                            evaluate_out / "predictions_tuned");
    const auto tuned_table = eval::map_summary(tuned_samples, class_names());
    eval::write_metrics_table(evaluate_out / "metrics_tuned.json", tuned_table);

    std::map<std::string, std::string> row_mapping;
    for (int c = 0; c < kNumClasses; ++c) {
      if (const auto name = map.source_name(c)) {
        row_mapping[*name] = class_names()[static_cast<size_t>(c)];
      }
    }
    const auto report = eval::compare(raw_table, tuned_table, row_mapping);
    eval::write_comparison_report(evaluate_out / "comparison_report.json",
                                  evaluate_out / "comparison_report.txt", report);
    log("evaluate:\n" + eval::render_text(report));
    mark_done(out_dir, "evaluate");
  }

  std::cout << (evaluate_out / "comparison_report.json").string() << "\n";
  return 0;
}

}  // namespace nightforge::cli
