#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "nightforge/core/errors.hpp"
#include "nightforge/scenegen/capture.hpp"
#include "nightforge/scenegen/mock_simulator.hpp"
#include "support/tempdir.hpp"

using namespace nightforge;
using namespace nightforge::scenegen;

TEST_CASE("scenario matrix is the cross product in a deterministic order") {
  MatrixConfig axes;
  axes.views = {View::kSide, View::kCenter};
  axes.directions = {Direction::kApproaching, Direction::kDeparting};
  axes.vehicle_counts = {1, 3};
  axes.headlight_modes = {HeadlightMode::kLowBeam};
  const auto matrix = scenario_matrix(axes);
  CHECK(matrix.size() == 8);

  MatrixConfig single;
  single.views = {View::kTop};
  single.directions = {Direction::kDeparting};
  single.vehicle_counts = {2};
  single.headlight_modes = {HeadlightMode::kHighBeam};
  CHECK(scenario_matrix(single).size() == 1);

  // purity: same config, same order
  const auto again = scenario_matrix(axes);
  for (size_t i = 0; i < matrix.size(); ++i) {
    CHECK(matrix[i].slug() == again[i].slug());
  }
}

TEST_CASE("default matrix covers the capture dichotomies") {
  const auto matrix = scenario_matrix(MatrixConfig{});
  CHECK(matrix.size() == 12);  // 3 views x 2 directions x {1,3} vehicles
  bool has_side_departing_single = false;
  for (const auto& s : matrix) {
    CHECK(std::string(Scenario::kWeather) == "CLEAR");
    CHECK(std::string(Scenario::kTimeOfDay) == "NIGHT");
    if (s.view == View::kSide && s.direction == Direction::kDeparting &&
        s.vehicle_count == 1) {
      has_side_departing_single = true;
    }
  }
  CHECK(has_side_departing_single);
}

TEST_CASE("empty axes are rejected") {
  MatrixConfig broken;
  broken.views.clear();
  CHECK_THROWS_AS(scenario_matrix(broken), ConfigError);
  MatrixConfig zero_vehicles;
  zero_vehicles.vehicle_counts = {0};
  CHECK_THROWS_AS(scenario_matrix(zero_vehicles), ConfigError);
}

TEST_CASE("frames_per_scenario is ceil division") {
  CHECK(frames_per_scenario(413, 12) == 35);
  CHECK(frames_per_scenario(413, 413) == 1);
  CHECK(frames_per_scenario(12, 12) == 1);
  CHECK(frames_per_scenario(0, 12) == 0);
  CHECK_THROWS_AS(frames_per_scenario(10, 0), ConfigError);
}

TEST_CASE("capture produces one record per frame plus a metadata sidecar") {
  testsupport::TempDir dir("capture");
  MockSimulator sim({11, 0, 0});
  Scenario scenario = scenario_matrix(MatrixConfig{}).front();
  CaptureOptions options;
  options.frame_width = 48;
  options.frame_height = 48;
  options.connect_backoff_ms = 0;
  const auto records = capture(sim, scenario, 50, dir.path(), options);
  REQUIRE(records.size() == 50);
  for (const auto& r : records) {
    CHECK(std::filesystem::exists(r.image));
  }
  // frames advance: first and last differ
  const Image first = load_image(records.front().image);
  const Image last = load_image(records.back().image);
  CHECK(first.pixels != last.pixels);

  const auto metadata = dir / ("capture_" + scenario.slug() + ".json");
  REQUIRE(std::filesystem::exists(metadata));
  const auto loaded = load_capture_metadata(metadata);
  REQUIRE(loaded.size() == records.size());
  for (size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].frame_index == static_cast<int>(i));
    CHECK(std::filesystem::exists(loaded[i].image));
  }
  // frames are dark: nighttime lock held
  CHECK(first.mean_brightness() < 0.2);
}

TEST_CASE("scripted spawn refusal is retried; connect failures back off") {
  testsupport::TempDir dir("retry");
  MockSimulator sim({5, 0, 2});  // refuse the first two spawns
  Scenario scenario = scenario_matrix(MatrixConfig{}).front();
  scenario.vehicle_count = 1;
  CaptureOptions options;
  options.frame_width = 32;
  options.frame_height = 32;
  options.connect_backoff_ms = 0;
  CaptureStats stats;
  const auto records = capture(sim, scenario, 2, dir.path(), options, &stats);
  CHECK(records.size() == 2);
  CHECK(sim.spawn_attempts() == 3);
  CHECK(stats.spawn_resamples == 2);
  // the re-samples are logged in the metadata sidecar
  std::ifstream meta(dir.path() / ("capture_" + scenario.slug() + ".json"));
  std::string contents((std::istreambuf_iterator<char>(meta)),
                       std::istreambuf_iterator<char>());
  CHECK(contents.find("\"spawn_resamples\": 2") != std::string::npos);

  MockSimulator flaky({5, 2, 0});  // two refused connects, then fine
  const auto more = capture(flaky, scenario, 1, dir / "second", options);
  CHECK(more.size() == 1);
  CHECK(flaky.connect_attempts() == 3);

  MockSimulator down({5, 100, 0});
  CHECK_THROWS_AS(capture(down, scenario, 1, dir / "third", options),
                  SimulatorError);
}

TEST_CASE("spawn retries are bounded") {
  testsupport::TempDir dir("bounded");
  MockSimulator sim({5, 0, 100});
  Scenario scenario = scenario_matrix(MatrixConfig{}).front();
  CaptureOptions options;
  options.connect_backoff_ms = 0;
  options.spawn_retries = 3;
  CHECK_THROWS_AS(capture(sim, scenario, 1, dir.path(), options), SimulatorError);
}

TEST_CASE("non-clear weather is refused end to end") {
  MockSimulator sim({1, 0, 0});
  sim.connect("localhost", 2000);
  CHECK_THROWS_AS(sim.set_environment("NIGHT", "RAIN"), SimulatorError);
}
