#include "nightforge/gan/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "nightforge/core/errors.hpp"
#include "nightforge/gan/image_pool.hpp"
#include "nightforge/gan/image_tensor.hpp"
#include "nightforge/gan/losses.hpp"
#include "nightforge/gan/model.hpp"
#include "nightforge/nn/adam.hpp"

namespace nightforge::gan {

using namespace nn;

namespace {

bool is_image_file(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Tensor> load_domain(const std::filesystem::path& dir, int size,
                                const char* name) {
  const auto files = list_images(dir);
  if (files.empty()) {
    throw ConfigError(std::string("domain ") + name +
                      " has no images: " + dir.string());
  }
  std::vector<Tensor> tensors;
  tensors.reserve(files.size());
  for (const auto& file : files) {
    tensors.push_back(image_to_tensor(resize_bilinear(load_image(file), size, size)));
  }
  return tensors;
}

Tensor make_batch(const std::vector<Tensor>& pool,
                  const std::vector<size_t>& order, size_t start, int batch,
                  bool flip, std::mt19937_64& rng) {
  const Tensor& first = pool[order[start % order.size()]];
  Tensor out({batch, first.dim(0), first.dim(1), first.dim(2)});
  const std::int64_t sample = first.numel();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int b = 0; b < batch; ++b) {
    Tensor src = pool[order[(start + b) % order.size()]];
    if (flip && coin(rng) > 0.5) src = flip_horizontal(src);
    std::memcpy(out.data() + b * sample, src.data(), sizeof(double) * sample);
  }
  return out;
}

double checked(const Var& loss, const char* term, int epoch) {
  const double v = loss.item();
  if (!std::isfinite(v)) {
    throw TrainingDivergedError(std::string(term) +
                                " became non-finite at epoch " +
                                std::to_string(epoch));
  }
  return v;
}

void write_log_header(std::ofstream& out) {
  out << "epoch,lr,loss_G_gan,loss_F_gan,loss_D_X,loss_D_Y,loss_cyc,loss_id,"
         "loss_total\n";
}

void write_log_row(std::ofstream& out, const EpochStats& s) {
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                s.epoch, s.lr, s.loss_g_gan, s.loss_f_gan, s.loss_d_x,
                s.loss_d_y, s.loss_cyc, s.loss_id, s.loss_total);
  out << buf;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const ModelConfig& model_cfg,
                  const std::filesystem::path& domain_day_dir,
                  const std::filesystem::path& domain_night_dir,
                  const std::filesystem::path& out_dir) {
  validate(cfg);
  validate(model_cfg);
  const int size = model_cfg.generator.input_size;
  const auto day = load_domain(domain_day_dir, size, "X (day)");
  const auto night = load_domain(domain_night_dir, size, "Y (night)");

  std::mt19937_64 master(cfg.seed);
  TranslationModel model(model_cfg, master());
  Adam opt_g(model.generator_params(), cfg.lr0, cfg.beta1, 0.999);
  Adam opt_d(model.discriminator_params(), cfg.lr0, cfg.beta1, 0.999);
  ImagePool pool_fake_night(cfg.fake_pool_size, master());
  ImagePool pool_fake_day(cfg.fake_pool_size, master());
  std::mt19937_64 shuffle_rng(master());
  std::mt19937_64 flip_rng(master());

  std::filesystem::create_directories(out_dir);
  std::ofstream log(out_dir / "loss_log.csv", std::ios::binary);
  if (!log) throw IoError("cannot write loss log in " + out_dir.string());
  write_log_header(log);

  TrainResult result;
  result.loss_log = out_dir / "loss_log.csv";
  const auto checkpoint_root = out_dir / "checkpoints";

  std::vector<size_t> day_order(day.size()), night_order(night.size());
  std::iota(day_order.begin(), day_order.end(), 0);
  std::iota(night_order.begin(), night_order.end(), 0);
  const size_t iters =
      (std::max(day.size(), night.size()) + cfg.batch_size - 1) / cfg.batch_size;

  for (int epoch = 1; epoch <= cfg.total_epochs(); ++epoch) {
    const double lr = lr_schedule(epoch, cfg);
    opt_g.set_lr(lr);
    opt_d.set_lr(lr);
    std::shuffle(day_order.begin(), day_order.end(), shuffle_rng);
    std::shuffle(night_order.begin(), night_order.end(), shuffle_rng);

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = lr;
    for (size_t it = 0; it < iters; ++it) {
      Var x(make_batch(day, day_order, it * cfg.batch_size, cfg.batch_size,
                       cfg.random_flip, flip_rng));
      Var y(make_batch(night, night_order, it * cfg.batch_size, cfg.batch_size,
                       cfg.random_flip, flip_rng));

      // Generator update. Reconstruction passes consume the attention
      // contexts the source-domain pass produced.
      opt_g.zero_grad();
      opt_d.zero_grad();
      auto fake_night = model.day_to_night().forward(x);
      auto cache_day_pass = Generator::make_cache(fake_night.contexts);
      auto rec_day = model.night_to_day().forward(fake_night.image, &cache_day_pass);
      auto fake_day = model.night_to_day().forward(y);
      auto cache_night_pass = Generator::make_cache(fake_day.contexts);
      auto rec_night = model.day_to_night().forward(fake_day.image, &cache_night_pass);
      auto idt_night = model.day_to_night().forward(y);
      auto idt_day = model.night_to_day().forward(x);

      LossParts parts;
      parts.adv_day_to_night =
          loss_gan_generator(model.night_discriminator().forward(fake_night.image));
      parts.adv_night_to_day =
          loss_gan_generator(model.day_discriminator().forward(fake_day.image));
      parts.cycle = loss_cycle(x, rec_day.image, y, rec_night.image);
      parts.identity = loss_identity(y, idt_night.image, x, idt_day.image);
      Var total = total_objective(parts, cfg.lambda_cyc, cfg.lambda_id);

      stats.loss_g_gan += checked(parts.adv_day_to_night, "loss_G_gan", epoch);
      stats.loss_f_gan += checked(parts.adv_night_to_day, "loss_F_gan", epoch);
      stats.loss_cyc += checked(parts.cycle, "loss_cyc", epoch);
      stats.loss_id += checked(parts.identity, "loss_id", epoch);
      stats.loss_total += checked(total, "loss_total", epoch);
      total.backward();
      opt_g.step();

      // Discriminator update on pooled, detached fakes.
      opt_d.zero_grad();
      Var pooled_night(pool_fake_night.query(fake_night.image.value().clone()));
      Var pooled_day(pool_fake_day.query(fake_day.image.value().clone()));
      Var loss_d_y =
          loss_gan_discriminator(model.night_discriminator().forward(y),
                                 model.night_discriminator().forward(pooled_night));
      Var loss_d_x =
          loss_gan_discriminator(model.day_discriminator().forward(x),
                                 model.day_discriminator().forward(pooled_day));
      stats.loss_d_y += checked(loss_d_y, "loss_D_Y", epoch);
      stats.loss_d_x += checked(loss_d_x, "loss_D_X", epoch);
      loss_d_y.backward();
      loss_d_x.backward();
      opt_d.step();
    }

    const double inv = 1.0 / static_cast<double>(iters);
    stats.loss_g_gan *= inv;
    stats.loss_f_gan *= inv;
    stats.loss_d_x *= inv;
    stats.loss_d_y *= inv;
    stats.loss_cyc *= inv;
    stats.loss_id *= inv;
    stats.loss_total *= inv;
    write_log_row(log, stats);
    log.flush();
    result.history.push_back(stats);

    if (epoch % cfg.checkpoint_every == 0 && epoch != cfg.total_epochs()) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%04d", epoch);
      save_checkpoint(checkpoint_root / name, model, cfg, epoch);
    }
  }

  result.final_checkpoint = checkpoint_root / "latest";
  save_checkpoint(result.final_checkpoint, model, cfg, cfg.total_epochs());
  return result;
}

}  // namespace nightforge::gan
