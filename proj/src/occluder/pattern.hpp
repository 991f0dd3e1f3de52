#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/image.hpp"
#include "common/rng.hpp"
#include "occluder/library.hpp"

namespace occbench::occluder {

enum class FillPolicy { SolidColor, SourceTexture };

struct Fill {
  FillPolicy policy = FillPolicy::SolidColor;
  Rgb color{128, 128, 128};
};

/// Parses "gray", "texture" or "rgb:r,g,b".
Fill parse_fill(const std::string& text);
std::string fill_to_string(const Fill& fill);

struct PatternPart {
  size_t silhouette = 0;  // index into the library
  double scale = 1.0;     // uniform, relative to the silhouette's native size
  int dx = 0;             // offset of the part centre from the pattern anchor
  int dy = 0;

  friend bool operator==(const PatternPart&, const PatternPart&) = default;
};

struct OcclusionPattern {
  std::vector<PatternPart> parts;
  Fill fill;

  friend bool operator==(const OcclusionPattern& a, const OcclusionPattern& b) {
    return a.parts == b.parts && a.fill.policy == b.fill.policy && a.fill.color == b.fill.color;
  }
};

/// Closed ranges; point ranges (min == max) are allowed.
struct PatternParams {
  int count_min = 1;
  int count_max = 3;
  double scale_min = 0.3;
  double scale_max = 0.7;
  int shift_min = -40;
  int shift_max = 40;

  void validate() const;
};

/// Groups, rescales and shifts library silhouettes. Deterministic in
/// (library content hash, params, key). Throws ConfigError on an empty library.
OcclusionPattern compose_pattern(const SilhouetteLibrary& library, const PatternParams& params, RngKey key,
                                 Fill fill = {});

/// Pattern rendered at a target resolution: the occluder mask plus the
/// colour it paints wherever the mask is set.
struct RenderedPattern {
  BinaryMask mask;
  RgbaImage paint;
};

/// Places the pattern anchor at (anchor_x, anchor_y). Parts are nearest-
/// neighbour scaled and clipped to the canvas; later parts paint over earlier
/// ones.
RenderedPattern render_pattern(const OcclusionPattern& pattern, const SilhouetteLibrary& library, int width,
                               int height, int anchor_x, int anchor_y);

/// occluded = mask ? paint : clean, pixel by pixel.
RgbaImage apply_occlusion(const RgbaImage& clean, const RenderedPattern& rendered);

/// Solid fill needs only the mask to be reproduced.
RgbaImage apply_solid_fill(const RgbaImage& clean, const BinaryMask& mask, Rgb color);

struct FractionBounds {
  double min = 0.1;
  double max = 0.6;
};

struct OverlayResult {
  RgbaImage occluded;
  BinaryMask mask;
  double occlusion_fraction = 0.0;
  bool placed = false;
  int tries = 0;
  int anchor_x = 0;
  int anchor_y = 0;
};

/// |mask & object| / |object|.
double occlusion_fraction(const BinaryMask& mask, const BinaryMask& object);

/// Rejection-samples anchors inside the object's bounding box until the
/// occlusion fraction lands in bounds. After max_tries the clean image comes
/// back unchanged with an all-false mask and placed = false. Throws
/// EmptyInputError ("empty object") when clean has no object pixels.
OverlayResult overlay_occlusion(const RgbaImage& clean, const OcclusionPattern& pattern,
                                const SilhouetteLibrary& library, FractionBounds bounds, int max_tries, RngKey key,
                                uint8_t alpha_threshold = 127);

}  // namespace occbench::occluder
