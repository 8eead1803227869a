#include "nightforge/scenegen/mock_simulator.hpp"

#include <algorithm>
#include <cmath>

namespace nightforge::scenegen {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

double unit(std::uint64_t h) {
  return static_cast<double>((h * 0x2545f4914f6cdd1dull) >> 11) /
         static_cast<double>(1ull << 53);
}

}  // namespace

void MockSimulator::connect(const std::string&, int) {
  ++connect_attempts_;
  if (connect_attempts_ <= options_.refuse_connects) {
    throw SimulatorError("mock simulator refused connection (scripted)");
  }
  connected_ = true;
}

void MockSimulator::load_map(const std::string& map_id) {
  if (!connected_) throw SimulatorError("load_map before connect");
  map_id_ = map_id;
  vehicles_.clear();
  ticks_ = 0;
}

void MockSimulator::set_environment(const std::string& time_of_day,
                                    const std::string& weather) {
  if (!connected_) throw SimulatorError("set_environment before connect");
  night_ = time_of_day == "NIGHT";
  if (weather != "CLEAR") {
    throw SimulatorError("mock simulator only models clear weather");
  }
}

int MockSimulator::spawn_vehicle(const VehicleSpawn& spawn) {
  if (!connected_) throw SimulatorError("spawn before connect");
  ++spawn_attempts_;
  if (spawn_attempts_ <= options_.refuse_spawns) {
    throw SpawnCollision("spawn point occupied (scripted)");
  }
  vehicles_.push_back(Vehicle{spawn.x, spawn.y, spawn.heading_deg});
  return static_cast<int>(vehicles_.size()) - 1;
}

void MockSimulator::set_headlights(int vehicle_id, HeadlightMode mode) {
  vehicles_.at(static_cast<size_t>(vehicle_id)).lights = mode;
}

void MockSimulator::set_vehicle_speed(int vehicle_id, double meters_per_tick) {
  vehicles_.at(static_cast<size_t>(vehicle_id)).speed = meters_per_tick;
}

void MockSimulator::attach_camera(const CameraPose& pose, int width,
                                  int height) {
  if (!connected_) throw SimulatorError("attach_camera before connect");
  camera_ = pose;
  frame_width_ = width;
  frame_height_ = height;
}

void MockSimulator::tick() {
  if (!connected_) throw SimulatorError("tick before connect");
  ++ticks_;
  for (auto& v : vehicles_) {
    const double rad = v.heading_deg * 3.14159265358979323846 / 180.0;
    v.x += std::cos(rad) * v.speed;
    v.y += std::sin(rad) * v.speed;
  }
}

Image MockSimulator::read_frame() {
  if (frame_width_ <= 0 || frame_height_ <= 0) {
    throw SimulatorError("read_frame before attach_camera");
  }
  const int w = frame_width_, h = frame_height_;
  Image frame = Image::solid(w, h, 0, 0, 0);

  // Night sky gradient plus faint sensor noise; brighter dusk if the
  // environment was never set to night.
  const int base = night_ ? 4 : 120;
  for (int y = 0; y < h; ++y) {
    const double horizon = static_cast<double>(y) / h;
    for (int x = 0; x < w; ++x) {
      std::uint64_t n = mix(mix(options_.seed, y * 131071 + x), ticks_);
      const int noise = static_cast<int>(unit(n) * 3.0);
      const int sky = base + static_cast<int>(horizon * 10.0) + noise;
      std::uint8_t* px = frame.at(x, y);
      px[0] = px[1] = static_cast<std::uint8_t>(std::min(sky, 255));
      px[2] = static_cast<std::uint8_t>(std::min(sky + 2, 255));
    }
  }
  // Road band across the lower third.
  const int road_top = h * 55 / 100;
  const int road_bottom = h * 92 / 100;
  for (int y = road_top; y < road_bottom; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t* px = frame.at(x, y);
      const int v = night_ ? 14 : 110;
      px[0] = px[1] = px[2] = static_cast<std::uint8_t>(v);
    }
  }

  const bool top_view = camera_.pitch < -45.0;
  for (size_t i = 0; i < vehicles_.size(); ++i) {
    const Vehicle& v = vehicles_[i];
    // World x in roughly [-20, 20] meters maps across the frame; lane y
    // offsets shift vertically a little.
    const double u = std::fmod(std::abs(v.x + 60.0), 40.0) / 40.0;
    const int cx = static_cast<int>(u * (w - 1));
    const int cy =
        std::clamp(static_cast<int>((top_view ? 0.5 : 0.72) * h + v.y * 2.0), 0,
                   h - 1);
    const int body_w = std::max(4, w / 7);
    const int body_h = std::max(3, top_view ? h / 9 : h / 11);
    for (int y = std::max(0, cy - body_h / 2);
         y <= std::min(h - 1, cy + body_h / 2); ++y) {
      for (int x = std::max(0, cx - body_w / 2);
           x <= std::min(w - 1, cx + body_w / 2); ++x) {
        std::uint8_t* px = frame.at(x, y);
        const int body = night_ ? 9 : 90;
        px[0] = px[1] = px[2] = static_cast<std::uint8_t>(body);
      }
    }
    // Two headlight glows at the leading edge.
    const bool facing_left = std::cos(v.heading_deg * 3.14159 / 180.0) < 0.0;
    const int lead_x = facing_left ? cx - body_w / 2 : cx + body_w / 2;
    const double intensity = v.lights == HeadlightMode::kHighBeam ? 1.0 : 0.7;
    const int radius = std::max(
        2, (v.lights == HeadlightMode::kHighBeam ? w / 14 : w / 20));
    for (int lamp = -1; lamp <= 1; lamp += 2) {
      const int ly = std::clamp(cy + lamp * body_h / 3, 0, h - 1);
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const int px_x = lead_x + dx, px_y = ly + dy;
          if (px_x < 0 || px_x >= w || px_y < 0 || px_y >= h) continue;
          const double dist = std::sqrt(double(dx * dx + dy * dy)) / radius;
          if (dist > 1.0) continue;
          const double glow = intensity * (1.0 - dist) * (1.0 - dist);
          std::uint8_t* px = frame.at(px_x, px_y);
          px[0] = static_cast<std::uint8_t>(
              std::min(255.0, px[0] + glow * 255.0));
          px[1] = static_cast<std::uint8_t>(
              std::min(255.0, px[1] + glow * 245.0));
          px[2] = static_cast<std::uint8_t>(
              std::min(255.0, px[2] + glow * 200.0));
        }
      }
    }
  }
  return frame;
}

}  // namespace nightforge::scenegen
