#include "nightforge/gan/image_tensor.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/core/errors.hpp"

namespace nightforge::gan {

nn::Tensor image_to_tensor(const Image& image) {
  if (image.empty()) throw ValidationError("cannot convert empty image");
  nn::Tensor t({3, image.height, image.width});
  const std::int64_t area = static_cast<std::int64_t>(image.height) * image.width;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const std::uint8_t* px = image.at(x, y);
      const std::int64_t pos = static_cast<std::int64_t>(y) * image.width + x;
      for (int c = 0; c < 3; ++c) {
        t[c * area + pos] = static_cast<double>(px[c]) / 127.5 - 1.0;
      }
    }
  }
  return t;
}

Image tensor_to_image(const nn::Tensor& tensor) {
  nn::Tensor t = tensor;
  if (t.ndim() == 4 && t.dim(0) == 1) {
    t = t.reshaped({t.dim(1), t.dim(2), t.dim(3)});
  }
  if (t.ndim() != 3 || t.dim(0) != 3) {
    throw ShapeError("tensor_to_image expects [3,H,W]");
  }
  Image image;
  image.height = t.dim(1);
  image.width = t.dim(2);
  image.pixels.resize(static_cast<size_t>(image.width) * image.height * 3);
  const std::int64_t area = static_cast<std::int64_t>(image.height) * image.width;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      std::uint8_t* px = image.at(x, y);
      const std::int64_t pos = static_cast<std::int64_t>(y) * image.width + x;
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(t[c * area + pos], -1.0, 1.0);
        px[c] = static_cast<std::uint8_t>(std::lround((v + 1.0) * 127.5));
      }
    }
  }
  return image;
}

nn::Tensor flip_horizontal(const nn::Tensor& chw) {
  if (chw.ndim() != 3) throw ShapeError("flip_horizontal expects [C,H,W]");
  const int c = chw.dim(0), h = chw.dim(1), w = chw.dim(2);
  nn::Tensor out({c, h, w});
  for (int ci = 0; ci < c; ++ci) {
    for (int y = 0; y < h; ++y) {
      const std::int64_t row = (static_cast<std::int64_t>(ci) * h + y) * w;
      for (int x = 0; x < w; ++x) out[row + x] = chw[row + (w - 1 - x)];
    }
  }
  return out;
}

}  // namespace nightforge::gan
