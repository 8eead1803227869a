#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace nightforge {

/// 8-bit RGB image, row-major, interleaved channels.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = width * height * 3

  static Image solid(int width, int height, std::uint8_t r, std::uint8_t g,
                     std::uint8_t b);

  bool empty() const { return pixels.empty(); }

  std::uint8_t* at(int x, int y) { return pixels.data() + 3 * (y * width + x); }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + 3 * (y * width + x);
  }

  /// Mean of all channel values scaled to [0,1].
  double mean_brightness() const;
};

/// Decodes an image file (PNG/JPEG/BMP). Throws IoError on failure.
Image load_image(const std::filesystem::path& path);

/// Encodes by extension (.png recommended for bit-stable round trips).
void save_image(const std::filesystem::path& path, const Image& image);

/// Reads only the dimensions. Throws IoError on failure.
std::pair<int, int> probe_image_dims(const std::filesystem::path& path);

/// Bilinear resampling with half-pixel-centered sampling. Deterministic.
Image resize_bilinear(const Image& src, int out_width, int out_height);

}  // namespace nightforge
