#include "nightforge/core/image.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "nightforge/core/errors.hpp"

namespace nightforge {

Image Image::solid(int width, int height, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
  Image img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height * 3);
  for (size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
  }
  return img;
}

double Image::mean_brightness() const {
  if (pixels.empty()) return 0.0;
  double sum = 0.0;
  for (std::uint8_t v : pixels) sum += v;
  return sum / (255.0 * static_cast<double>(pixels.size()));
}

Image load_image(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw IoError("cannot decode image: " + path.string());
  }
  Image img;
  img.width = bgr.cols;
  img.height = bgr.rows;
  img.pixels.resize(static_cast<size_t>(bgr.cols) * bgr.rows * 3);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      std::uint8_t* px = img.at(x, y);
      px[0] = row[x][2];
      px[1] = row[x][1];
      px[2] = row[x][0];
    }
  }
  return img;
}

void save_image(const std::filesystem::path& path, const Image& image) {
  if (image.empty()) throw IoError("refusing to save empty image");
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int y = 0; y < image.height; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width; ++x) {
      const std::uint8_t* px = image.at(x, y);
      row[x] = cv::Vec3b(px[2], px[1], px[0]);
    }
  }
  std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), bgr)) {
    throw IoError("cannot write image: " + path.string());
  }
}

std::pair<int, int> probe_image_dims(const std::filesystem::path& path) {
  const Image img = load_image(path);
  return {img.width, img.height};
}

Image resize_bilinear(const Image& src, int out_width, int out_height) {
  if (src.empty() || out_width <= 0 || out_height <= 0) {
    throw ValidationError("resize requires a non-empty source and positive dims");
  }
  if (out_width == src.width && out_height == src.height) return src;
  Image dst;
  dst.width = out_width;
  dst.height = out_height;
  dst.pixels.resize(static_cast<size_t>(out_width) * out_height * 3);
  const double sx = static_cast<double>(src.width) / out_width;
  const double sy = static_cast<double>(src.height) / out_height;
  for (int y = 0; y < out_height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0,
                                 static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0,
                                   static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - x0;
      std::uint8_t* out = dst.at(x, y);
      const std::uint8_t* p00 = src.at(x0, y0);
      const std::uint8_t* p10 = src.at(x1, y0);
      const std::uint8_t* p01 = src.at(x0, y1);
      const std::uint8_t* p11 = src.at(x1, y1);
      for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + (p10[c] - p00[c]) * wx;
        const double bottom = p01[c] + (p11[c] - p01[c]) * wx;
        const double value = top + (bottom - top) * wy;
        out[c] = static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 255.0)));
      }
    }
  }
  return dst;
}

}  // namespace nightforge
