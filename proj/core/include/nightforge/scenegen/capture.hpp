#pragma once

#include <filesystem>
#include <vector>

#include "nightforge/scenegen/simulator.hpp"

namespace nightforge::scenegen {

struct CaptureRecord {
  std::filesystem::path image;
  Scenario scenario;
  int frame_index = 0;
  std::string simulator_version;
};

struct CaptureOptions {
  std::string host = "localhost";
  int port = 2000;
  int frame_width = 256;
  int frame_height = 256;
  int connect_retries = 3;
  int connect_backoff_ms = 250;  // doubled per retry; 0 in tests
  int spawn_retries = 8;
  double vehicle_speed = 0.8;    // meters per fixed tick
  std::uint64_t seed = 0;
};

struct CaptureStats {
  int spawn_resamples = 0;
  int connect_attempts = 1;
};

/// Drives one scenario: connect (with bounded backoff), load the map, lock
/// the environment to clear night, spawn vehicles (re-sampling refused
/// spawn points a bounded number of times), set headlights, attach the
/// camera, then tick/persist n_frames frames under out_dir/images. A
/// metadata sidecar under out_dir pairs one record with every frame.
std::vector<CaptureRecord> capture(SimulatorClient& sim,
                                   const Scenario& scenario, int n_frames,
                                   const std::filesystem::path& out_dir,
                                   const CaptureOptions& options = {},
                                   CaptureStats* stats_out = nullptr);

void write_capture_metadata(const std::filesystem::path& path,
                            const std::vector<CaptureRecord>& records,
                            const CaptureStats& stats = {});
std::vector<CaptureRecord> load_capture_metadata(const std::filesystem::path& path);

}  // namespace nightforge::scenegen
