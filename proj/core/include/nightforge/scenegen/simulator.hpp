#pragma once

#include <cstdint>
#include <string>

#include "nightforge/core/errors.hpp"
#include "nightforge/core/image.hpp"
#include "nightforge/scenegen/scenario.hpp"

namespace nightforge::scenegen {

struct VehicleSpawn {
  double x = 0.0;
  double y = 0.0;
  double heading_deg = 0.0;
  int vehicle_type = 0;
};

/// Spawn rejected because the requested point is occupied; capture
/// re-samples a bounded number of times.
class SpawnCollision : public Error {
 public:
  using Error::Error;
};

/// Thin client over a driving simulator. Tests and the desk-scale pipeline
/// run against the scripted mock; a real RPC binding implements the same
/// surface. Ticking is fixed-step and synchronous for reproducibility.
class SimulatorClient {
 public:
  virtual ~SimulatorClient() = default;

  virtual void connect(const std::string& host, int port) = 0;
  virtual bool connected() const = 0;
  virtual std::string version() const = 0;

  virtual void load_map(const std::string& map_id) = 0;
  virtual void set_environment(const std::string& time_of_day,
                               const std::string& weather) = 0;

  /// Returns the simulator's vehicle id. Throws SpawnCollision when the
  /// point is occupied.
  virtual int spawn_vehicle(const VehicleSpawn& spawn) = 0;
  virtual void set_headlights(int vehicle_id, HeadlightMode mode) = 0;
  virtual void set_vehicle_speed(int vehicle_id, double meters_per_tick) = 0;

  virtual void attach_camera(const CameraPose& pose, int width, int height) = 0;
  virtual void tick() = 0;
  virtual Image read_frame() = 0;
};

}  // namespace nightforge::scenegen
