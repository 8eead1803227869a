#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nightforge {

/// Tolerance for boxes touching the image border after clamping.
inline constexpr double kBoxEpsilon = 1e-6;

inline constexpr int kClassSedan = 0;
inline constexpr int kClassSvpBv = 1;
inline constexpr int kNumClasses = 2;

/// Names of the two persisted vehicle classes, indexed by class id.
const std::vector<std::string>& class_names();

/// Axis-aligned box in normalized center format. All fields are fractions
/// of the image dimensions: (cx, cy) is the box center, (w, h) its size.
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const BoundingBox&) const = default;
};

/// True when the box lies inside the unit square (within kBoxEpsilon) and
/// has positive extent.
bool box_is_valid(const BoundingBox& box);

/// Clamps box corners into [0,1] and re-derives the center format.
/// Throws ValidationError if the clamped box has no positive area.
BoundingBox clamp_box_to_image(const BoundingBox& box);

/// One labeled object. Ground truth carries no confidence; detector output
/// does. class_index is always in the persisted two-class scheme.
struct Annotation {
  int class_index = 0;
  BoundingBox box;
  std::optional<double> confidence;

  bool operator==(const Annotation&) const = default;
};

enum class Domain {
  kDayReal,
  kNightReal,
  kNightSim,
  kNightTransferred,
};

std::string_view to_string(Domain domain);
Domain domain_from_string(std::string_view name);

/// An image on disk plus its dimensions, domain tag, and provenance.
/// source_of is present exactly when domain == kNightTransferred and names
/// the daytime image this one was translated from.
struct ImageRecord {
  std::filesystem::path path;
  int width_px = 0;
  int height_px = 0;
  Domain domain = Domain::kDayReal;
  std::optional<std::filesystem::path> source_of;
};

/// Throws ValidationError when dimensions are non-positive or the
/// domain/provenance pairing rule is broken.
void validate_record(const ImageRecord& record);

struct LabeledImage {
  ImageRecord image;
  std::vector<Annotation> annotations;  // may be empty (negative image)
};

}  // namespace nightforge
