#pragma once

#include <string>
#include <vector>

namespace nightforge::scenegen {

enum class View { kSide, kCenter, kTop };
enum class Direction { kApproaching, kDeparting };
enum class HeadlightMode { kLowBeam, kHighBeam };

std::string to_string(View v);
std::string to_string(Direction d);
std::string to_string(HeadlightMode m);
View view_from_string(const std::string& s);
Direction direction_from_string(const std::string& s);
HeadlightMode headlight_from_string(const std::string& s);

struct CameraPose {
  double x = 0.0, y = 0.0, z = 0.0;
  double pitch = 0.0, yaw = 0.0, roll = 0.0;
};

/// One capture setup. Weather and time of day are locked to clear night;
/// the scenario carries them only so every persisted record can assert the
/// lock.
struct Scenario {
  View view = View::kSide;
  Direction direction = Direction::kApproaching;
  int vehicle_count = 1;
  HeadlightMode headlights = HeadlightMode::kLowBeam;
  CameraPose camera;
  std::string map_id;

  static constexpr const char* kWeather = "CLEAR";
  static constexpr const char* kTimeOfDay = "NIGHT";

  /// Stable identifier, e.g. "side_approaching_v1_low".
  std::string slug() const;
};

/// Axis values to cross. Defaults reproduce the capture dichotomies
/// (approach/depart, side/top views plus the center view, single/multi
/// vehicle) under low beams.
struct MatrixConfig {
  std::vector<View> views = {View::kSide, View::kCenter, View::kTop};
  std::vector<Direction> directions = {Direction::kApproaching,
                                       Direction::kDeparting};
  std::vector<int> vehicle_counts = {1, 3};
  std::vector<HeadlightMode> headlight_modes = {HeadlightMode::kLowBeam};
  std::string map_id = "rural_two_lane";
};

/// Full cross product of the requested axes in deterministic
/// (view-major) order. Throws ConfigError on an empty axis.
std::vector<Scenario> scenario_matrix(const MatrixConfig& config);

/// Frames per scenario needed to reach a target pool size: ceil division.
int frames_per_scenario(int target_pool_size, int matrix_size);

/// Camera placement derived from the view/direction axes.
CameraPose camera_pose_for(View view, Direction direction);

}  // namespace nightforge::scenegen
