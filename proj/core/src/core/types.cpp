#include "nightforge/core/types.hpp"

#include <algorithm>
#include <cmath>

#include "nightforge/core/errors.hpp"

namespace nightforge {

const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names = {"Sedan", "SVP_BV"};
  return names;
}

bool box_is_valid(const BoundingBox& box) {
  if (!(box.w > 0.0) || !(box.h > 0.0)) return false;
  if (box.cx - box.w / 2.0 < -kBoxEpsilon) return false;
  if (box.cy - box.h / 2.0 < -kBoxEpsilon) return false;
  if (box.cx + box.w / 2.0 > 1.0 + kBoxEpsilon) return false;
  if (box.cy + box.h / 2.0 > 1.0 + kBoxEpsilon) return false;
  return std::isfinite(box.cx) && std::isfinite(box.cy) &&
         std::isfinite(box.w) && std::isfinite(box.h);
}

BoundingBox clamp_box_to_image(const BoundingBox& box) {
  const double x0 = std::clamp(box.cx - box.w / 2.0, 0.0, 1.0);
  const double y0 = std::clamp(box.cy - box.h / 2.0, 0.0, 1.0);
  const double x1 = std::clamp(box.cx + box.w / 2.0, 0.0, 1.0);
  const double y1 = std::clamp(box.cy + box.h / 2.0, 0.0, 1.0);
  BoundingBox clamped{(x0 + x1) / 2.0, (y0 + y1) / 2.0, x1 - x0, y1 - y0};
  if (!(clamped.w > 0.0) || !(clamped.h > 0.0)) {
    throw ValidationError("box lies entirely outside the image");
  }
  return clamped;
}

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::kDayReal:
      return "DAY_REAL";
    case Domain::kNightReal:
      return "NIGHT_REAL";
    case Domain::kNightSim:
      return "NIGHT_SIM";
    case Domain::kNightTransferred:
      return "NIGHT_TRANSFERRED";
  }
  return "UNKNOWN";
}

Domain domain_from_string(std::string_view name) {
  if (name == "DAY_REAL") return Domain::kDayReal;
  if (name == "NIGHT_REAL") return Domain::kNightReal;
  if (name == "NIGHT_SIM") return Domain::kNightSim;
  if (name == "NIGHT_TRANSFERRED") return Domain::kNightTransferred;
  throw ValidationError("unknown domain tag: " + std::string(name));
}

void validate_record(const ImageRecord& record) {
  if (record.width_px <= 0 || record.height_px <= 0) {
    throw ValidationError("image dimensions must be positive: " +
                          record.path.string());
  }
  const bool transferred = record.domain == Domain::kNightTransferred;
  if (transferred != record.source_of.has_value()) {
    throw ValidationError(
        "source_of must be present exactly for NIGHT_TRANSFERRED images: " +
        record.path.string());
  }
}

}  // namespace nightforge
