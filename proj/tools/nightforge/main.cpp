#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "nightforge/core/errors.hpp"

namespace {

using nightforge::cli::RunConfig;

std::string error_kind(const std::exception& e) {
  using namespace nightforge;
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const ProvenanceError*>(&e)) return "provenance";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const TrainingDivergedError*>(&e)) return "training_diverged";
  if (dynamic_cast<const SimulatorError*>(&e)) return "simulator";
  if (dynamic_cast<const CacheError*>(&e)) return "cache";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const Error*>(&e)) return "error";
  return "internal";
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON config file (falls back to $NIGHTFORGE_CONFIG)");
  cmd->add_option("--out-dir", flags.out_dir, "Output directory");
  cmd->add_option("--seed", flags.seed, "Global seed override")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
}

/// Folds command-line overrides into the loaded config so one resolved
/// document drives the run and lands in run_config.json.
RunConfig resolve(const CommonFlags& flags,
                  const std::function<void(RunConfig&)>& fold_extra = {}) {
  RunConfig cfg = RunConfig::load(flags.config_path);
  if (flags.seed_set) cfg.set("seed", flags.seed);
  if (fold_extra) fold_extra(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nightforge: labeling-free day-to-night data augmentation pipeline for "
      "nighttime vehicle detection"};
  app.require_subcommand(1);

  // ---- scenegen ----
  CommonFlags sg;
  int sg_frames = 0, sg_target = 0, sg_frame_size = 256, sg_port = 0;
  std::string sg_host;
  auto* scenegen = app.add_subcommand(
      "scenegen", "Capture synthetic nighttime frames over the scenario matrix");
  add_common(scenegen, sg);
  scenegen->add_option("--frames-per-scenario", sg_frames,
                       "Frames per scenario (overrides --target-pool)");
  scenegen->add_option("--target-pool", sg_target,
                       "Total pool size to split across the matrix");
  scenegen->add_option("--frame-size", sg_frame_size, "Square frame size, px");
  scenegen->add_option("--sim-host", sg_host,
                       "Simulator host ($NIGHTFORGE_SIM_HOST overrides)");
  scenegen->add_option("--sim-port", sg_port,
                       "Simulator port ($NIGHTFORGE_SIM_PORT overrides)");

  // ---- train-style ----
  CommonFlags ts;
  std::string ts_day, ts_night;
  double ts_lr0 = -1, ts_beta1 = -1, ts_lambda_cyc = -1, ts_lambda_id = -1;
  int ts_n_epochs = -1, ts_n_epochs_decay = -1, ts_input_size = -1;
  int ts_batch = -1, ts_base_channels = -1, ts_res_blocks = -1;
  auto* train_style = app.add_subcommand(
      "train-style", "Train the day-to-night translation model");
  add_common(train_style, ts);
  train_style->add_option("--day", ts_day, "Daytime image directory")->required();
  train_style->add_option("--night", ts_night, "Nighttime image directory")
      ->required();
  train_style->add_option("--lr0", ts_lr0, "Initial learning rate");
  train_style->add_option("--beta1", ts_beta1, "Adam momentum term");
  train_style->add_option("--n-epochs", ts_n_epochs, "Constant-lr epochs");
  train_style->add_option("--n-epochs-decay", ts_n_epochs_decay,
                          "Linear-decay epochs");
  train_style->add_option("--input-size", ts_input_size, "Model input size");
  train_style->add_option("--lambda-cyc", ts_lambda_cyc, "Cycle loss weight");
  train_style->add_option("--lambda-id", ts_lambda_id, "Identity loss weight");
  train_style->add_option("--batch-size", ts_batch, "Batch size");
  train_style->add_option("--base-channels", ts_base_channels,
                          "Generator base width");
  train_style->add_option("--n-residual-blocks", ts_res_blocks,
                          "Residual blocks in the generator");

  // ---- translate ----
  CommonFlags tr;
  std::string tr_checkpoint, tr_images;
  auto* translate = app.add_subcommand(
      "translate", "Translate day images to night with a trained checkpoint");
  add_common(translate, tr);
  translate->add_option("--checkpoint", tr_checkpoint, "Checkpoint directory")
      ->required();
  translate->add_option("--images", tr_images, "Input image directory")
      ->required();

  // ---- autolabel ----
  CommonFlags al;
  std::string al_day, al_translated, al_fixtures;
  double al_conf = -1.0;
  auto* autolabel = app.add_subcommand(
      "autolabel", "Detect on day images and transfer labels to translations");
  add_common(autolabel, al);
  autolabel->add_option("--day", al_day, "Daytime image directory")->required();
  autolabel->add_option("--translated", al_translated,
                        "translate output directory")
      ->required();
  autolabel->add_option("--conf-threshold", al_conf,
                        "Auto-label confidence cutoff");
  autolabel->add_option("--fixtures", al_fixtures,
                        "Mock detector fixture directory");

  // ---- assemble ----
  CommonFlags as;
  std::string as_real_images, as_real_labels, as_aug_images, as_aug_labels;
  std::string as_translation_manifest, as_mix;
  auto* assemble = app.add_subcommand(
      "assemble", "Mix real and augmented pools into a train/val/test corpus");
  add_common(assemble, as);
  assemble->add_option("--real-images", as_real_images, "Real night images")
      ->required();
  assemble->add_option("--real-labels", as_real_labels, "Real night labels")
      ->required();
  assemble->add_option("--augmented-images", as_aug_images,
                       "Transferred night images")
      ->required();
  assemble->add_option("--augmented-labels", as_aug_labels,
                       "Transferred night labels")
      ->required();
  assemble->add_option("--translation-manifest", as_translation_manifest,
                       "translation_manifest.json for provenance")
      ->required();
  assemble->add_option("--mix", as_mix, "Mix spec JSON file");

  // ---- finetune ----
  CommonFlags ft;
  std::string ft_manifest, ft_plan = "default", ft_fixtures;
  auto* finetune = app.add_subcommand(
      "finetune", "Staged block-wise fine-tune of the detector adapter");
  add_common(finetune, ft);
  finetune->add_option("--manifest", ft_manifest, "Dataset manifest JSON")
      ->required();
  finetune->add_option("--plan", ft_plan,
                       "Stage plan: default | default-exclusive | file.json");
  finetune->add_option("--fixtures", ft_fixtures,
                       "Mock detector fixture directory");

  // ---- evaluate ----
  CommonFlags ev;
  std::string ev_preds, ev_gts;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Detection metrics from prediction and label files");
  add_common(evaluate, ev);
  evaluate->add_option("--preds", ev_preds, "Prediction file directory")
      ->required();
  evaluate->add_option("--gts", ev_gts, "Ground-truth label directory")
      ->required();

  // ---- compare ----
  CommonFlags cp;
  std::string cp_baseline, cp_candidate, cp_map_rows;
  auto* compare = app.add_subcommand(
      "compare", "Side-by-side metrics tables with deltas");
  add_common(compare, cp);
  compare->add_option("--baseline", cp_baseline, "Baseline metrics JSON")
      ->required();
  compare->add_option("--candidate", cp_candidate, "Candidate metrics JSON")
      ->required();
  compare->add_option("--map-rows", cp_map_rows,
                      "Rename baseline rows, e.g. car=Sedan,truck=SVP_BV");

  // ---- pipeline ----
  CommonFlags pl;
  auto* pipeline = app.add_subcommand(
      "pipeline",
      "translate -> autolabel -> assemble -> finetune -> evaluate with resume");
  add_common(pipeline, pl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    if (*scenegen) {
      RunConfig cfg = resolve(sg, [&](RunConfig& c) {
        if (!sg_host.empty()) c.doc()["simulator"]["host"] = sg_host;
        if (sg_port > 0) c.doc()["simulator"]["port"] = sg_port;
        c.doc()["args"] = {{"frames_per_scenario", sg_frames},
                           {"target_pool", sg_target},
                           {"frame_size", sg_frame_size}};
      });
      return nightforge::cli::cmd_scenegen(cfg, sg.out_dir, sg_frames,
                                           sg_target, sg_frame_size);
    }
    if (*train_style) {
      RunConfig cfg = resolve(ts, [&](RunConfig& c) {
        if (ts_lr0 >= 0) c.set("lr0", ts_lr0);
        if (ts_beta1 >= 0) c.set("beta1", ts_beta1);
        if (ts_n_epochs >= 0) c.set("n_epochs", ts_n_epochs);
        if (ts_n_epochs_decay >= 0) c.set("n_epochs_decay", ts_n_epochs_decay);
        if (ts_input_size > 0) c.set("input_size", ts_input_size);
        if (ts_lambda_cyc >= 0) c.set("lambda_cyc", ts_lambda_cyc);
        if (ts_lambda_id >= 0) c.set("lambda_id", ts_lambda_id);
        if (ts_batch > 0) c.set("batch_size", ts_batch);
        if (ts_base_channels > 0) c.set("base_channels", ts_base_channels);
        if (ts_res_blocks >= 0) c.set("n_residual_blocks", ts_res_blocks);
        c.doc()["args"] = {{"day", ts_day}, {"night", ts_night}};
      });
      return nightforge::cli::cmd_train_style(cfg, ts_day, ts_night, ts.out_dir);
    }
    if (*translate) {
      RunConfig cfg = resolve(tr, [&](RunConfig& c) {
        c.doc()["args"] = {{"checkpoint", tr_checkpoint}, {"images", tr_images}};
      });
      return nightforge::cli::cmd_translate(cfg, tr_checkpoint, tr_images,
                                            tr.out_dir);
    }
    if (*autolabel) {
      RunConfig cfg = resolve(al, [&](RunConfig& c) {
        if (!al_fixtures.empty()) {
          c.doc()["detector"]["kind"] = "mock";
          c.doc()["detector"]["fixtures"] = al_fixtures;
        }
        if (al_conf >= 0) c.doc()["detector"]["conf_threshold"] = al_conf;
        c.doc()["args"] = {{"day", al_day}, {"translated", al_translated}};
      });
      return nightforge::cli::cmd_autolabel(cfg, al_day, al_translated,
                                            al.out_dir, cfg.conf_threshold());
    }
    if (*assemble) {
      RunConfig cfg = resolve(as, [&](RunConfig& c) {
        c.doc()["args"] = {{"real_images", as_real_images},
                           {"real_labels", as_real_labels},
                           {"augmented_images", as_aug_images},
                           {"augmented_labels", as_aug_labels},
                           {"translation_manifest", as_translation_manifest},
                           {"mix", as_mix}};
      });
      return nightforge::cli::cmd_assemble(
          cfg, as_real_images, as_real_labels, as_aug_images, as_aug_labels,
          as_translation_manifest, as_mix, as.out_dir);
    }
    if (*finetune) {
      RunConfig cfg = resolve(ft, [&](RunConfig& c) {
        if (!ft_fixtures.empty()) {
          c.doc()["detector"]["kind"] = "mock";
          c.doc()["detector"]["fixtures"] = ft_fixtures;
        }
        c.doc()["args"] = {{"manifest", ft_manifest}, {"plan", ft_plan}};
      });
      return nightforge::cli::cmd_finetune(cfg, ft_manifest, ft_plan, ft.out_dir);
    }
    if (*evaluate) {
      RunConfig cfg = resolve(ev, [&](RunConfig& c) {
        c.doc()["args"] = {{"preds", ev_preds}, {"gts", ev_gts}};
      });
      return nightforge::cli::cmd_evaluate(cfg, ev_preds, ev_gts, ev.out_dir);
    }
    if (*compare) {
      RunConfig cfg = resolve(cp, [&](RunConfig& c) {
        c.doc()["args"] = {{"baseline", cp_baseline},
                           {"candidate", cp_candidate},
                           {"map_rows", cp_map_rows}};
      });
      return nightforge::cli::cmd_compare(cfg, cp_baseline, cp_candidate,
                                          cp_map_rows, cp.out_dir);
    }
    if (*pipeline) {
      RunConfig cfg = resolve(pl);
      return nightforge::cli::cmd_pipeline(cfg, pl.out_dir);
    }
  } catch (const std::exception& e) {
    nightforge::cli::log(std::string("error: ") + e.what());
    nlohmann::json summary{
        {"error", {{"type", error_kind(e)}, {"message", e.what()}}}};
    std::cerr << summary.dump() << "\n";
    return 1;
  }
  return 2;
}
