#include "nightforge/autolabel/mock_detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge::autolabel {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  return fnv1a(h, s.data(), s.size());
}

/// Uniform [0,1) value derived from a hash, stable across platforms.
double unit_from_hash(std::uint64_t h) {
  return static_cast<double>(h >> 11) /
         static_cast<double>(1ull << 53);
}

std::string hash_to_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::string>& coco_vehicle_vocabulary() {
  // Only the ids the default class map touches need real names.
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v(80);
    for (size_t i = 0; i < v.size(); ++i) v[i] = "coco" + std::to_string(i);
    v[0] = "person";
    v[2] = "car";
    v[5] = "bus";
    v[7] = "truck";
    return v;
  }();
  return names;
}

struct FixtureDetection {
  int class_id;
  double confidence;
  BoundingBox box;
};

std::vector<FixtureDetection> load_fixture(const std::filesystem::path& path) {
  std::vector<FixtureDetection> detections;
  std::ifstream in(path);
  if (!in) return detections;  // absent fixture -> no objects
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    FixtureDetection det;
    if (!(fields >> det.class_id >> det.confidence >> det.box.cx >>
          det.box.cy >> det.box.w >> det.box.h)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      throw ParseError("bad fixture line in " + path.string(), line_number);
    }
    detections.push_back(det);
  }
  return detections;
}

}  // namespace

MockDetector::MockDetector(Options options)
    : options_(std::move(options)), skill_(options_.skill) {
  for (const char* block : {"backbone", "neck", "head"}) {
    block_hashes_[block] = fnv1a(kFnvOffset, std::string(block));
  }
}

std::vector<std::string> MockDetector::class_vocabulary() const {
  if (fine_tuned_) return class_names();
  return coco_vehicle_vocabulary();
}

std::vector<Detection> MockDetector::detect(const ImageRecord& image) {
  const std::string stem = image.path.stem().string();
  const auto fixtures =
      load_fixture(options_.fixtures_dir / (stem + ".txt"));
  const ClassMap remap = default_class_map();

  std::vector<Detection> detections;
  for (size_t i = 0; i < fixtures.size(); ++i) {
    const auto& f = fixtures[i];
    std::uint64_t h = fnv1a(kFnvOffset, stem);
    h = fnv1a(h, &i, sizeof(i));
    const double visibility = unit_from_hash(h);
    // Monotone in skill: raising the skill never hides a detection.
    if (visibility > 0.3 + 0.7 * skill_) continue;

    const double amplitude = 0.08 * (1.0 - skill_);
    const double dx = (unit_from_hash(fnv1a(h, "dx")) - 0.5) * amplitude;
    const double dy = (unit_from_hash(fnv1a(h, "dy")) - 0.5) * amplitude;

    Detection det;
    det.confidence = std::clamp(f.confidence * (0.35 + 0.65 * skill_), 0.0, 1.0);
    BoundingBox box = f.box;
    box.cx = std::clamp(box.cx + dx, box.w / 2.0, 1.0 - box.w / 2.0);
    box.cy = std::clamp(box.cy + dy, box.h / 2.0, 1.0 - box.h / 2.0);
    det.box = box;
    if (fine_tuned_) {
      const auto target = remap.remap(f.class_id);
      if (!target) continue;  // the re-trained head only knows two classes
      det.class_id = *target;
    } else {
      det.class_id = f.class_id;
    }
    detections.push_back(det);
  }
  std::stable_sort(detections.begin(), detections.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.confidence > b.confidence;
                   });
  return detections;
}

std::vector<std::string> MockDetector::list_blocks() {
  return {"backbone", "neck", "head"};
}

void MockDetector::set_trainable(const std::set<std::string>& blocks) {
  for (const auto& block : blocks) {
    if (!block_hashes_.count(block)) {
      throw ValidationError("unknown detector block: " + block);
    }
  }
  trainable_ = blocks;
  calls_.push_back({CallRecord::Kind::kSetTrainable, blocks, 0.0, 0});
}

void MockDetector::fit(const dataset::DatasetManifest&, double lr, int epochs) {
  ++fit_calls_;
  calls_.push_back({CallRecord::Kind::kFit, {}, lr, epochs});
  if (options_.fail_on_fit_call > 0 && fit_calls_ == options_.fail_on_fit_call) {
    throw Error("mock detector scripted fit failure");
  }
  for (const auto& block : trainable_) {
    std::uint64_t h = block_hashes_[block];
    h = fnv1a(h, &lr, sizeof(lr));
    h = fnv1a(h, &epochs, sizeof(epochs));
    h = fnv1a(h, &fit_calls_, sizeof(fit_calls_));
    block_hashes_[block] = h;
  }
  const double gain = 0.5 * std::min(1.0, epochs / 50.0);
  skill_ += (1.0 - skill_) * gain;
  fine_tuned_ = true;
}

std::string MockDetector::parameter_hash(const std::string& block) {
  auto it = block_hashes_.find(block);
  if (it == block_hashes_.end()) {
    throw ValidationError("unknown detector block: " + block);
  }
  return hash_to_hex(it->second);
}

void MockDetector::save(const std::filesystem::path& path) {
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& [block, h] : block_hashes_) hashes[block] = hash_to_hex(h);
  nlohmann::json doc{{"kind", "mock"},
                     {"fixtures_dir", options_.fixtures_dir.string()},
                     {"skill", skill_},
                     {"fine_tuned", fine_tuned_},
                     {"block_hashes", hashes}};
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write detector artifact: " + path.string());
  out << doc.dump(2) << "\n";
}

void MockDetector::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read detector artifact: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt detector artifact: " + std::string(e.what()));
  }
  if (doc.at("kind").get<std::string>() != "mock") {
    throw ValidationError("artifact is not a mock detector model");
  }
  options_.fixtures_dir = doc.at("fixtures_dir").get<std::string>();
  skill_ = doc.at("skill").get<double>();
  fine_tuned_ = doc.at("fine_tuned").get<bool>();
  for (const auto& [block, hex] : doc.at("block_hashes").items()) {
    block_hashes_[block] =
        std::stoull(hex.get<std::string>(), nullptr, 16);
  }
}

}  // namespace nightforge::autolabel
