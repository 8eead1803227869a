#include "nightforge/scenegen/scenario.hpp"

#include "nightforge/core/errors.hpp"

namespace nightforge::scenegen {

std::string to_string(View v) {
  switch (v) {
    case View::kSide: return "side";
    case View::kCenter: return "center";
    case View::kTop: return "top";
  }
  return "?";
}

std::string to_string(Direction d) {
  return d == Direction::kApproaching ? "approaching" : "departing";
}

std::string to_string(HeadlightMode m) {
  return m == HeadlightMode::kLowBeam ? "low" : "high";
}

View view_from_string(const std::string& s) {
  if (s == "side") return View::kSide;
  if (s == "center") return View::kCenter;
  if (s == "top") return View::kTop;
  throw ConfigError("unknown view: " + s);
}

Direction direction_from_string(const std::string& s) {
  if (s == "approaching") return Direction::kApproaching;
  if (s == "departing") return Direction::kDeparting;
  throw ConfigError("unknown direction: " + s);
}

HeadlightMode headlight_from_string(const std::string& s) {
  if (s == "low") return HeadlightMode::kLowBeam;
  if (s == "high") return HeadlightMode::kHighBeam;
  throw ConfigError("unknown headlight mode: " + s);
}

std::string Scenario::slug() const {
  return to_string(view) + "_" + to_string(direction) + "_v" +
         std::to_string(vehicle_count) + "_" + to_string(headlights);
}

CameraPose camera_pose_for(View view, Direction direction) {
  // Roadside pole heights/offsets in meters; yaw faces the traffic.
  CameraPose pose;
  const double facing = direction == Direction::kApproaching ? 180.0 : 0.0;
  switch (view) {
    case View::kSide:
      pose = {6.5, -4.0, 5.5, -12.0, facing + 35.0, 0.0};
      break;
    case View::kCenter:
      pose = {0.0, 0.0, 6.0, -10.0, facing, 0.0};
      break;
    case View::kTop:
      pose = {2.0, 0.0, 14.0, -65.0, facing, 0.0};
      break;
  }
  return pose;
}

std::vector<Scenario> scenario_matrix(const MatrixConfig& config) {
  if (config.views.empty()) throw ConfigError("scenario axis 'views' is empty");
  if (config.directions.empty()) {
    throw ConfigError("scenario axis 'directions' is empty");
  }
  if (config.vehicle_counts.empty()) {
    throw ConfigError("scenario axis 'vehicle_counts' is empty");
  }
  if (config.headlight_modes.empty()) {
    throw ConfigError("scenario axis 'headlight_modes' is empty");
  }
  for (int count : config.vehicle_counts) {
    if (count < 1) throw ConfigError("vehicle_count must be positive");
  }
  std::vector<Scenario> scenarios;
  for (View view : config.views) {
    for (Direction direction : config.directions) {
      for (int count : config.vehicle_counts) {
        for (HeadlightMode mode : config.headlight_modes) {
          Scenario s;
          s.view = view;
          s.direction = direction;
          s.vehicle_count = count;
          s.headlights = mode;
          s.camera = camera_pose_for(view, direction);
          s.map_id = config.map_id;
          scenarios.push_back(s);
        }
      }
    }
  }
  return scenarios;
}

int frames_per_scenario(int target_pool_size, int matrix_size) {
  if (target_pool_size < 0 || matrix_size <= 0) {
    throw ConfigError("need a non-negative target and a non-empty matrix");
  }
  return (target_pool_size + matrix_size - 1) / matrix_size;
}

}  // namespace nightforge::scenegen
