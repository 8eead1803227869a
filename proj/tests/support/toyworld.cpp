#include "support/toyworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/autolabel/class_map.hpp"
#include "nightforge/core/annotation_io.hpp"
#include "nightforge/scenegen/capture.hpp"
#include "nightforge/scenegen/mock_simulator.hpp"

namespace testsupport {

using nightforge::Annotation;
using nightforge::BoundingBox;
using nightforge::Image;

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

double unit(std::uint64_t h) {
  return static_cast<double>((h * 0x2545f4914f6cdd1dull) >> 11) /
         static_cast<double>(1ull << 53);
}

void fill_gradient(Image& img, int top, int bottom, std::uint64_t seed) {
  for (int y = 0; y < img.height; ++y) {
    const double t = static_cast<double>(y) / img.height;
    const int base = static_cast<int>(top + (bottom - top) * t);
    for (int x = 0; x < img.width; ++x) {
      const int noise = static_cast<int>(unit(mix(seed, y * 8191 + x)) * 6.0);
      std::uint8_t* px = img.at(x, y);
      const int v = std::clamp(base + noise, 0, 255);
      px[0] = px[1] = px[2] = static_cast<std::uint8_t>(v);
    }
  }
}

void fill_rect(Image& img, const BoundingBox& box, int value) {
  const int x0 = std::clamp(static_cast<int>((box.cx - box.w / 2) * img.width), 0,
                            img.width - 1);
  const int x1 = std::clamp(static_cast<int>((box.cx + box.w / 2) * img.width), 0,
                            img.width - 1);
  const int y0 = std::clamp(static_cast<int>((box.cy - box.h / 2) * img.height),
                            0, img.height - 1);
  const int y1 = std::clamp(static_cast<int>((box.cy + box.h / 2) * img.height),
                            0, img.height - 1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      std::uint8_t* px = img.at(x, y);
      px[0] = px[1] = px[2] = static_cast<std::uint8_t>(value);
    }
  }
}

void glow(Image& img, int cx, int cy, int radius, double intensity) {
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int x = cx + dx, y = cy + dy;
      if (x < 0 || x >= img.width || y < 0 || y >= img.height) continue;
      const double d = std::sqrt(double(dx * dx + dy * dy)) / radius;
      if (d > 1.0) continue;
      const double g = intensity * (1.0 - d) * (1.0 - d);
      std::uint8_t* px = img.at(x, y);
      px[0] = static_cast<std::uint8_t>(std::min(255.0, px[0] + 255.0 * g));
      px[1] = static_cast<std::uint8_t>(std::min(255.0, px[1] + 240.0 * g));
      px[2] = static_cast<std::uint8_t>(std::min(255.0, px[2] + 190.0 * g));
    }
  }
}

}  // namespace

std::vector<ToyVehicle> scripted_vehicles(std::uint64_t seed, int index) {
  std::vector<ToyVehicle> vehicles;
  const std::uint64_t h = mix(seed, static_cast<std::uint64_t>(index) + 101);
  const int count = 1 + static_cast<int>(unit(h) * 2.0);  // 1..2
  const int classes[3] = {2, 5, 7};
  for (int v = 0; v < count; ++v) {
    const std::uint64_t hv = mix(h, v + 17);
    ToyVehicle vehicle;
    vehicle.coco_class = classes[static_cast<int>(unit(mix(hv, 1)) * 3.0) % 3];
    vehicle.box.w = 0.18 + unit(mix(hv, 2)) * 0.12;
    vehicle.box.h = 0.10 + unit(mix(hv, 3)) * 0.08;
    vehicle.box.cx = std::clamp(0.2 + unit(mix(hv, 4)) * 0.6, vehicle.box.w / 2,
                                1.0 - vehicle.box.w / 2);
    vehicle.box.cy = std::clamp(0.62 + unit(mix(hv, 5)) * 0.18,
                                vehicle.box.h / 2, 1.0 - vehicle.box.h / 2);
    vehicle.confidence = 0.55 + unit(mix(hv, 6)) * 0.4;
    vehicles.push_back(vehicle);
  }
  return vehicles;
}

Image render_day_scene(int width, int height,
                       const std::vector<ToyVehicle>& vehicles,
                       std::uint64_t noise_seed) {
  Image img = Image::solid(width, height, 0, 0, 0);
  fill_gradient(img, 215, 165, noise_seed);
  // road band
  for (int y = height * 55 / 100; y < height * 92 / 100; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t* px = img.at(x, y);
      px[0] = px[1] = px[2] = 128;
    }
  }
  for (const auto& v : vehicles) fill_rect(img, v.box, 45);
  return img;
}

Image render_night_scene(int width, int height,
                         const std::vector<ToyVehicle>& vehicles,
                         std::uint64_t noise_seed) {
  Image img = Image::solid(width, height, 0, 0, 0);
  fill_gradient(img, 3, 10, noise_seed);
  for (int y = height * 55 / 100; y < height * 92 / 100; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t* px = img.at(x, y);
      px[0] = px[1] = px[2] = 13;
    }
  }
  for (const auto& v : vehicles) {
    fill_rect(img, v.box, 8);
    const int cy = static_cast<int>(v.box.cy * height);
    const int lx =
        static_cast<int>((v.box.cx - v.box.w / 2.0 + 0.02) * width);
    const int spread = std::max(1, static_cast<int>(v.box.h * height / 3.0));
    const int radius = std::max(2, static_cast<int>(v.box.w * width / 5.0));
    glow(img, lx, cy - spread, radius, 0.85);
    glow(img, lx, cy + spread, radius, 0.85);
  }
  return img;
}

void write_detector_fixture(const std::filesystem::path& path,
                            const std::vector<ToyVehicle>& vehicles) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  char line[160];
  for (const auto& v : vehicles) {
    std::snprintf(line, sizeof(line), "%d %.6f %.6f %.6f %.6f %.6f\n",
                  v.coco_class, v.confidence, v.box.cx, v.box.cy, v.box.w,
                  v.box.h);
    out << line;
  }
}

void write_ground_truth(const std::filesystem::path& path,
                        const std::vector<ToyVehicle>& vehicles) {
  const auto map = nightforge::autolabel::default_class_map();
  std::vector<Annotation> annotations;
  for (const auto& v : vehicles) {
    const auto target = map.remap(v.coco_class);
    if (!target) continue;
    annotations.push_back(Annotation{*target, v.box, {}});
  }
  nightforge::write_annotation_file(path, annotations);
}

void write_two_tone_domains(const std::filesystem::path& day_dir,
                            const std::filesystem::path& night_dir,
                            int images_per_domain, int size,
                            std::uint64_t seed) {
  std::filesystem::create_directories(day_dir);
  std::filesystem::create_directories(night_dir);
  char name[32];
  for (int i = 0; i < images_per_domain; ++i) {
    const int bright = 200 + static_cast<int>(unit(mix(seed, i)) * 40.0);
    const int dark = 10 + static_cast<int>(unit(mix(seed, 1000 + i)) * 25.0);
    std::snprintf(name, sizeof(name), "tone_%03d.png", i);
    nightforge::save_image(
        day_dir / name,
        Image::solid(size, size, static_cast<std::uint8_t>(bright),
                     static_cast<std::uint8_t>(bright),
                     static_cast<std::uint8_t>(std::min(bright + 10, 255))));
    nightforge::save_image(
        night_dir / name,
        Image::solid(size, size, static_cast<std::uint8_t>(dark),
                     static_cast<std::uint8_t>(dark),
                     static_cast<std::uint8_t>(dark + 4)));
  }
}

E2EFixture build_e2e_fixture(const std::filesystem::path& root,
                             std::uint64_t seed) {
  E2EFixture fx;
  fx.root = root;
  fx.day_images = root / "day" / "images";
  fx.fixtures = root / "detector_fixtures";
  fx.night_real_images = root / "night_real" / "images";
  fx.night_real_labels = root / "night_real" / "labels";
  fx.sim_night_images = root / "sim_night" / "images";
  fx.mix_spec_json = root / "mix.json";
  fx.config_json = root / "pipeline.json";
  fx.style_out = root / "style_out";
  fx.pipeline_out = root / "pipeline_out";
  fx.n_day = 30;
  fx.n_night_real = 14;

  const int size = 64;
  char name[32];
  for (int i = 0; i < fx.n_day; ++i) {
    const auto vehicles = scripted_vehicles(seed, i);
    std::snprintf(name, sizeof(name), "day_%03d", i);
    nightforge::save_image(fx.day_images / (std::string(name) + ".png"),
                           render_day_scene(size, size, vehicles, mix(seed, i)));
    write_detector_fixture(fx.fixtures / (std::string(name) + ".txt"), vehicles);
  }
  for (int i = 0; i < fx.n_night_real; ++i) {
    const auto vehicles = scripted_vehicles(seed ^ 0x9177ull, 500 + i);
    std::snprintf(name, sizeof(name), "night_%03d", i);
    nightforge::save_image(
        fx.night_real_images / (std::string(name) + ".png"),
        render_night_scene(size, size, vehicles, mix(seed, 500 + i)));
    write_ground_truth(fx.night_real_labels / (std::string(name) + ".txt"),
                       vehicles);
    write_detector_fixture(fx.fixtures / (std::string(name) + ".txt"),
                           vehicles);
  }

  // Night-domain pool for style training straight from the mock simulator.
  nightforge::scenegen::MockSimulator sim({seed, 0, 0});
  nightforge::scenegen::MatrixConfig axes;
  axes.views = {nightforge::scenegen::View::kSide,
                nightforge::scenegen::View::kCenter};
  axes.vehicle_counts = {1, 2};
  nightforge::scenegen::CaptureOptions copts;
  copts.frame_width = size;
  copts.frame_height = size;
  copts.connect_backoff_ms = 0;
  copts.seed = seed;
  const auto scenarios = nightforge::scenegen::scenario_matrix(axes);
  for (const auto& scenario : scenarios) {
    nightforge::scenegen::capture(sim, scenario, 3, root / "sim_night", copts);
  }

  nlohmann::json mix{
      {"seed", seed},
      {"splits",
       {{"train", {{"real", 8}, {"augmented", 18}}},
        {"val", {{"real", 3}, {"augmented", 6}}},
        {"test", {{"real", 3}, {"augmented", 6}}}}}};
  std::ofstream(fx.mix_spec_json) << mix.dump(2) << "\n";

  nlohmann::json config{
      {"seed", seed},
      {"n_epochs", 3},
      {"n_epochs_decay", 3},
      {"lr0", 0.0002},
      {"beta1", 0.5},
      {"input_size", 32},
      {"lambda_cyc", 10.0},
      {"lambda_id", 0.5},
      {"batch_size", 1},
      {"checkpoint_every", 100},
      {"fake_pool_size", 16},
      {"base_channels", 8},
      {"n_residual_blocks", 1},
      {"disc_layers", 2},
      {"paths",
       {{"day_pool", fx.day_images.string()},
        {"night_pool", fx.sim_night_images.string()},
        {"real_night_images", fx.night_real_images.string()},
        {"real_night_labels", fx.night_real_labels.string()},
        {"style_checkpoint",
         (fx.style_out / "checkpoints" / "latest").string()}}},
      {"mix", mix},
      {"stage_plan", "default"},
      {"detector",
       {{"kind", "mock"},
        {"fixtures", fx.fixtures.string()},
        {"skill", 0.2},
        {"conf_threshold", 0.25}}},
      {"simulator", {{"kind", "mock"}, {"host", "localhost"}, {"port", 2000}}}};
  std::ofstream(fx.config_json) << config.dump(2) << "\n";
  return fx;
}

}  // namespace testsupport
