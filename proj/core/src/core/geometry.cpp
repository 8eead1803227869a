#include "nightforge/core/geometry.hpp"

#include <algorithm>

#include "nightforge/core/errors.hpp"

namespace nightforge {

double PixelBox::area() const {
  return std::max(0.0, width()) * std::max(0.0, height());
}

PixelBox to_pixel(const BoundingBox& box, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0) {
    throw ValidationError("image dimensions must be positive");
  }
  const double w = static_cast<double>(width_px);
  const double h = static_cast<double>(height_px);
  return PixelBox{(box.cx - box.w / 2.0) * w, (box.cy - box.h / 2.0) * h,
                  (box.cx + box.w / 2.0) * w, (box.cy + box.h / 2.0) * h};
}

BoundingBox to_normalized(const PixelBox& box, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0) {
    throw ValidationError("image dimensions must be positive");
  }
  const double w = static_cast<double>(width_px);
  const double h = static_cast<double>(height_px);
  return BoundingBox{(box.x_min + box.x_max) / (2.0 * w),
                     (box.y_min + box.y_max) / (2.0 * h),
                     (box.x_max - box.x_min) / w, (box.y_max - box.y_min) / h};
}

}  // namespace nightforge
