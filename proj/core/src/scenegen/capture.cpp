#include "nightforge/scenegen/capture.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

namespace nightforge::scenegen {

namespace {

void connect_with_backoff(SimulatorClient& sim, const CaptureOptions& options,
                          CaptureStats& stats) {
  int backoff = options.connect_backoff_ms;
  for (int attempt = 0; ; ++attempt) {
    try {
      stats.connect_attempts = attempt + 1;
      sim.connect(options.host, options.port);
      return;
    } catch (const SimulatorError&) {
      if (attempt >= options.connect_retries) throw;
      if (backoff > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
        backoff *= 2;
      }
    }
  }
}

}  // namespace

std::vector<CaptureRecord> capture(SimulatorClient& sim,
                                   const Scenario& scenario, int n_frames,
                                   const std::filesystem::path& out_dir,
                                   const CaptureOptions& options,
                                   CaptureStats* stats_out) {
  if (n_frames <= 0) throw ConfigError("n_frames must be positive");
  CaptureStats stats;
  if (!sim.connected()) connect_with_backoff(sim, options, stats);
  sim.load_map(scenario.map_id);
  sim.set_environment(Scenario::kTimeOfDay, Scenario::kWeather);

  std::mt19937_64 rng(options.seed ^ std::hash<std::string>{}(scenario.slug()));
  std::uniform_real_distribution<double> lane_offset(-3.0, 3.0);
  std::uniform_real_distribution<double> gap(6.0, 14.0);

  const double heading =
      scenario.direction == Direction::kApproaching ? 180.0 : 0.0;
  double spawn_x = scenario.direction == Direction::kApproaching ? 20.0 : -20.0;
  for (int v = 0; v < scenario.vehicle_count; ++v) {
    int vehicle_id = -1;
    for (int attempt = 0; ; ++attempt) {
      VehicleSpawn spawn;
      spawn.x = spawn_x;
      spawn.y = lane_offset(rng);
      spawn.heading_deg = heading;
      try {
        vehicle_id = sim.spawn_vehicle(spawn);
        break;
      } catch (const SpawnCollision&) {
        if (attempt >= options.spawn_retries) {
          throw SimulatorError("spawn retries exhausted for scenario " +
                               scenario.slug());
        }
        ++stats.spawn_resamples;
        spawn_x += scenario.direction == Direction::kApproaching ? 1.5 : -1.5;
      }
    }
    sim.set_headlights(vehicle_id, scenario.headlights);
    sim.set_vehicle_speed(vehicle_id, options.vehicle_speed *
                                          (heading == 180.0 ? -1.0 : 1.0));
    spawn_x += scenario.direction == Direction::kApproaching ? gap(rng)
                                                             : -gap(rng);
  }

  sim.attach_camera(scenario.camera, options.frame_width, options.frame_height);

  const auto images_dir = out_dir / "images";
  std::filesystem::create_directories(images_dir);
  std::vector<CaptureRecord> records;
  for (int frame = 0; frame < n_frames; ++frame) {
    sim.tick();
    const Image image = sim.read_frame();
    char name[96];
    std::snprintf(name, sizeof(name), "%s_f%04d.png", scenario.slug().c_str(),
                  frame);
    const auto path = images_dir / name;
    save_image(path, image);
    CaptureRecord record;
    record.image = path;
    record.scenario = scenario;
    record.frame_index = frame;
    record.simulator_version = sim.version();
    records.push_back(std::move(record));
  }
  write_capture_metadata(out_dir / ("capture_" + scenario.slug() + ".json"),
                         records, stats);
  if (stats_out) *stats_out = stats;
  return records;
}

void write_capture_metadata(const std::filesystem::path& path,
                            const std::vector<CaptureRecord>& records,
                            const CaptureStats& stats) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& r : records) {
    frames.push_back({{"image", r.image.filename().string()},
                      {"frame_index", r.frame_index}});
  }
  nlohmann::json scenario_json;
  if (!records.empty()) {
    const Scenario& s = records.front().scenario;
    scenario_json = {{"view", to_string(s.view)},
                     {"direction", to_string(s.direction)},
                     {"vehicle_count", s.vehicle_count},
                     {"headlights", to_string(s.headlights)},
                     {"map_id", s.map_id},
                     {"weather", Scenario::kWeather},
                     {"time_of_day", Scenario::kTimeOfDay},
                     {"camera",
                      {{"x", s.camera.x},
                       {"y", s.camera.y},
                       {"z", s.camera.z},
                       {"pitch", s.camera.pitch},
                       {"yaw", s.camera.yaw},
                       {"roll", s.camera.roll}}}};
  }
  nlohmann::json doc{{"schema_version", 1},
                     {"simulator_version",
                      records.empty() ? "" : records.front().simulator_version},
                     {"scenario", scenario_json},
                     {"spawn_resamples", stats.spawn_resamples},
                     {"connect_attempts", stats.connect_attempts},
                     {"frames", frames}};
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write capture metadata: " + path.string());
  out << doc.dump(2) << "\n";
}

std::vector<CaptureRecord> load_capture_metadata(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read capture metadata: " + path.string());
  nlohmann::json doc;
  in >> doc;
  std::vector<CaptureRecord> records;
  const auto& sj = doc.at("scenario");
  Scenario scenario;
  if (!sj.is_null()) {
    scenario.view = view_from_string(sj.at("view").get<std::string>());
    scenario.direction =
        direction_from_string(sj.at("direction").get<std::string>());
    scenario.vehicle_count = sj.at("vehicle_count").get<int>();
    scenario.headlights =
        headlight_from_string(sj.at("headlights").get<std::string>());
    scenario.map_id = sj.at("map_id").get<std::string>();
    if (sj.at("weather").get<std::string>() != Scenario::kWeather ||
        sj.at("time_of_day").get<std::string>() != Scenario::kTimeOfDay) {
      throw ValidationError("capture metadata violates the clear-night lock");
    }
  }
  for (const auto& f : doc.at("frames")) {
    CaptureRecord r;
    r.image = path.parent_path() / "images" / f.at("image").get<std::string>();
    r.frame_index = f.at("frame_index").get<int>();
    r.scenario = scenario;
    r.simulator_version = doc.value("simulator_version", "");
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace nightforge::scenegen
