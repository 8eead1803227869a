#pragma once

#include "nightforge/core/types.hpp"

namespace nightforge {

/// Corner-format box in pixel units.
struct PixelBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool operator==(const PixelBox&) const = default;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const;
};

/// Center-format normalized box -> pixel corners.
PixelBox to_pixel(const BoundingBox& box, int width_px, int height_px);

/// Pixel corners -> center-format normalized box. Inverse of to_pixel
/// within 1e-6.
BoundingBox to_normalized(const PixelBox& box, int width_px, int height_px);

}  // namespace nightforge
