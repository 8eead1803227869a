#include "nightforge/gan/translate.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"
#include "nightforge/core/image.hpp"
#include "nightforge/gan/image_tensor.hpp"
#include "nightforge/gan/model.hpp"

namespace nightforge::gan {

TranslateReport translate(const std::filesystem::path& checkpoint_dir,
                          const std::vector<std::filesystem::path>& images,
                          const std::filesystem::path& out_dir) {
  CheckpointedModel checkpoint(checkpoint_dir);
  const int size = checkpoint.info().model_cfg.generator.input_size;
  const Generator& day_to_night = checkpoint.model().day_to_night();

  TranslateReport report;
  const auto images_out = out_dir / "images";
  std::filesystem::create_directories(images_out);

  for (const auto& src_path : images) {
    try {
      const Image original = load_image(src_path);
      const Image resized = resize_bilinear(original, size, size);
      nn::Tensor input = image_to_tensor(resized);
      nn::Var x(input.reshaped({1, 3, size, size}));
      auto forward = day_to_night.forward(x);
      Image night = tensor_to_image(forward.image.value());
      night = resize_bilinear(night, original.width, original.height);
      const auto dst_path = images_out / (src_path.stem().string() + ".png");
      save_image(dst_path, night);

      ImageRecord record;
      record.path = dst_path;
      record.width_px = original.width;
      record.height_px = original.height;
      record.domain = Domain::kNightTransferred;
      record.source_of = src_path;
      validate_record(record);
      report.outputs.push_back(std::move(record));
    } catch (const Error& e) {
      report.failures.push_back({src_path, e.what()});
    }
  }

  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& record : report.outputs) {
    manifest.push_back({{"image", record.path.filename().string()},
                        {"width_px", record.width_px},
                        {"height_px", record.height_px},
                        {"domain", std::string(to_string(record.domain))},
                        {"source", record.source_of->string()}});
  }
  nlohmann::json doc{{"schema_version", 1}, {"records", manifest}};
  if (!report.failures.empty()) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : report.failures) {
      failures.push_back({{"path", f.path.string()}, {"error", f.message}});
    }
    doc["failures"] = failures;
  }
  report.manifest_path = out_dir / "translation_manifest.json";
  std::ofstream out(report.manifest_path);
  if (!out) {
    throw IoError("cannot write translation manifest: " +
                  report.manifest_path.string());
  }
  out << doc.dump(2) << "\n";
  return report;
}

TranslateReport translate_directory(const std::filesystem::path& checkpoint_dir,
                                    const std::filesystem::path& images_dir,
                                    const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> images;
  if (std::filesystem::exists(images_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(images_dir)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp") {
        images.push_back(entry.path());
      }
    }
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) {
    throw ConfigError("no images to translate in " + images_dir.string());
  }
  return translate(checkpoint_dir, images, out_dir);
}

std::vector<ImageRecord> load_translation_manifest(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read translation manifest: " + path.string());
  nlohmann::json doc;
  in >> doc;
  std::vector<ImageRecord> records;
  for (const auto& j : doc.at("records")) {
    ImageRecord r;
    r.path = path.parent_path() / "images" / j.at("image").get<std::string>();
    r.width_px = j.at("width_px").get<int>();
    r.height_px = j.at("height_px").get<int>();
    r.domain = domain_from_string(j.at("domain").get<std::string>());
    r.source_of = std::filesystem::path(j.at("source").get<std::string>());
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace nightforge::gan
