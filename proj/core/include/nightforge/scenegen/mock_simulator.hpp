#pragma once

#include <vector>

#include "nightforge/scenegen/simulator.hpp"

namespace nightforge::scenegen {

/// Scripted simulator: renders procedural nighttime road frames (dark
/// scene, road band, vehicle silhouettes with glowing headlights) entirely
/// deterministically. Connection failures and spawn refusals can be
/// scripted to exercise retry paths.
class MockSimulator : public SimulatorClient {
 public:
  struct Options {
    std::uint64_t seed = 0;
    int refuse_connects = 0;  // initial connect() calls to fail
    int refuse_spawns = 0;    // initial spawn_vehicle() calls to refuse
  };

  MockSimulator() = default;
  explicit MockSimulator(Options options) : options_(options) {}

  void connect(const std::string& host, int port) override;
  bool connected() const override { return connected_; }
  std::string version() const override { return "mock-sim/1.0"; }

  void load_map(const std::string& map_id) override;
  void set_environment(const std::string& time_of_day,
                       const std::string& weather) override;

  int spawn_vehicle(const VehicleSpawn& spawn) override;
  void set_headlights(int vehicle_id, HeadlightMode mode) override;
  void set_vehicle_speed(int vehicle_id, double meters_per_tick) override;

  void attach_camera(const CameraPose& pose, int width, int height) override;
  void tick() override;
  Image read_frame() override;

  int connect_attempts() const { return connect_attempts_; }
  int spawn_attempts() const { return spawn_attempts_; }

 private:
  struct Vehicle {
    double x, y, heading_deg;
    double speed = 0.0;
    HeadlightMode lights = HeadlightMode::kLowBeam;
  };

  Options options_;
  bool connected_ = false;
  bool night_ = false;
  std::string map_id_;
  std::vector<Vehicle> vehicles_;
  CameraPose camera_;
  int frame_width_ = 0;
  int frame_height_ = 0;
  int ticks_ = 0;
  int connect_attempts_ = 0;
  int spawn_attempts_ = 0;
};

}  // namespace nightforge::scenegen
