#include "occluder/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "common/error.hpp"

namespace occbench::occluder {

Fill parse_fill(const std::string& text) {
  if (text == "gray" || text == "solid") return Fill{};
  if (text == "texture") return Fill{FillPolicy::SourceTexture, {128, 128, 128}};
  if (text.rfind("rgb:", 0) == 0) {
    int r, g, b;
    char tail;
    if (std::sscanf(text.c_str() + 4, "%d,%d,%d%c", &r, &g, &b, &tail) == 3 && r >= 0 && r <= 255 && g >= 0 &&
        g <= 255 && b >= 0 && b <= 255)
      return Fill{FillPolicy::SolidColor,
                  {static_cast<uint8_t>(r), static_cast<uint8_t>(g), static_cast<uint8_t>(b)}};
  }
  throw InvalidArgument("bad fill '" + text + "' (expected gray, texture or rgb:r,g,b)");
}

std::string fill_to_string(const Fill& fill) {
  if (fill.policy == FillPolicy::SourceTexture) return "texture";
  return "rgb:" + std::to_string(fill.color[0]) + "," + std::to_string(fill.color[1]) + "," +
         std::to_string(fill.color[2]);
}

void PatternParams::validate() const {
  if (count_min < 1 || count_max < count_min) throw ConfigError("count range must satisfy 1 <= min <= max");
  if (!(scale_min > 0.0) || scale_max < scale_min) throw ConfigError("scale range must satisfy 0 < min <= max");
  if (shift_max < shift_min) throw ConfigError("shift range must satisfy min <= max");
}

OcclusionPattern compose_pattern(const SilhouetteLibrary& library, const PatternParams& params, RngKey key,
                                 Fill fill) {
  if (library.empty()) throw ConfigError("silhouette library is empty");
  params.validate();
  Rng rng(key.derive(library.content_hash()));
  OcclusionPattern pattern;
  pattern.fill = fill;
  const auto count = rng.between(params.count_min, params.count_max);
  for (int64_t i = 0; i < count; ++i) {
    PatternPart part;
    part.silhouette = static_cast<size_t>(rng.below(library.size()));
    part.scale = params.scale_min == params.scale_max ? params.scale_min
                                                      : rng.uniform(params.scale_min, params.scale_max);
    part.dx = static_cast<int>(rng.between(params.shift_min, params.shift_max));
    part.dy = static_cast<int>(rng.between(params.shift_min, params.shift_max));
    pattern.parts.push_back(part);
  }
  return pattern;
}

RenderedPattern render_pattern(const OcclusionPattern& pattern, const SilhouetteLibrary& library, int width,
                               int height, int anchor_x, int anchor_y) {
  RenderedPattern out{BinaryMask(width, height), RgbaImage(width, height)};
  const Rgba solid{pattern.fill.color[0], pattern.fill.color[1], pattern.fill.color[2], 255};
  for (const auto& part : pattern.parts) {
    if (part.silhouette >= library.size()) throw InvalidArgument("pattern references a missing silhouette");
    if (!(part.scale > 0.0)) throw InvalidArgument("pattern part scale must be > 0");
    const Silhouette& sil = library[part.silhouette];
    const int sw = std::max(1, static_cast<int>(std::lround(sil.mask.width() * part.scale)));
    const int sh = std::max(1, static_cast<int>(std::lround(sil.mask.height() * part.scale)));
    const int left = anchor_x + part.dx - sw / 2;
    const int top = anchor_y + part.dy - sh / 2;
    const int x_begin = std::max(0, left), x_end = std::min(width, left + sw);
    const int y_begin = std::max(0, top), y_end = std::min(height, top + sh);
    for (int y = y_begin; y < y_end; ++y) {
      const int sy = std::min(sil.mask.height() - 1, static_cast<int>((y - top + 0.5) / part.scale));
      for (int x = x_begin; x < x_end; ++x) {
        const int sx = std::min(sil.mask.width() - 1, static_cast<int>((x - left + 0.5) / part.scale));
        if (!sil.mask.get(sx, sy)) continue;
        out.mask.set(x, y, true);
        const uint8_t* src =
            pattern.fill.policy == FillPolicy::SourceTexture ? sil.texture.at(sx, sy) : solid.data();
        std::copy_n(src, 4, out.paint.at(x, y));
      }
    }
  }
  return out;
}

RgbaImage apply_occlusion(const RgbaImage& clean, const RenderedPattern& rendered) {
  if (clean.width() != rendered.mask.width() || clean.height() != rendered.mask.height())
    throw InvalidArgument("pattern and image sizes differ");
  RgbaImage out = clean;
  for (int y = 0; y < clean.height(); ++y)
    for (int x = 0; x < clean.width(); ++x)
      if (rendered.mask.get(x, y)) std::copy_n(rendered.paint.at(x, y), 4, out.at(x, y));
  return out;
}

RgbaImage apply_solid_fill(const RgbaImage& clean, const BinaryMask& mask, Rgb color) {
  if (clean.width() != mask.width() || clean.height() != mask.height())
    throw InvalidArgument("mask and image sizes differ");
  RgbaImage out = clean;
  const Rgba px{color[0], color[1], color[2], 255};
  for (int y = 0; y < clean.height(); ++y)
    for (int x = 0; x < clean.width(); ++x)
      if (mask.get(x, y)) std::copy_n(px.data(), 4, out.at(x, y));
  return out;
}

double occlusion_fraction(const BinaryMask& mask, const BinaryMask& object) {
  const size_t total = object.popcount();
  if (total == 0) throw EmptyInputError("empty object");
  return static_cast<double>(intersection_count(mask, object)) / static_cast<double>(total);
}

OverlayResult overlay_occlusion(const RgbaImage& clean, const OcclusionPattern& pattern,
                                const SilhouetteLibrary& library, FractionBounds bounds, int max_tries, RngKey key,
                                uint8_t alpha_threshold) {
  const BinaryMask object = extract_silhouette(clean, alpha_threshold);
  int x0 = clean.width(), y0 = clean.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < object.height(); ++y)
    for (int x = 0; x < object.width(); ++x)
      if (object.get(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) throw EmptyInputError("empty object");
  if (bounds.min > bounds.max) throw ConfigError("occlusion fraction bounds must satisfy min <= max");

  Rng rng(key);
  OverlayResult result;
  for (int t = 0; t < max_tries; ++t) {
    const int ax = static_cast<int>(rng.between(x0, x1));
    const int ay = static_cast<int>(rng.between(y0, y1));
    RenderedPattern rendered = render_pattern(pattern, library, clean.width(), clean.height(), ax, ay);
    const double fraction = occlusion_fraction(rendered.mask, object);
    if (fraction >= bounds.min && fraction <= bounds.max) {
      result.occluded = apply_occlusion(clean, rendered);
      result.mask = std::move(rendered.mask);
      result.occlusion_fraction = fraction;
      result.placed = true;
      result.tries = t + 1;
      result.anchor_x = ax;
      result.anchor_y = ay;
      return result;
    }
  }
  result.occluded = clean;
  result.mask = BinaryMask(clean.width(), clean.height());
  result.tries = max_tries;
  return result;
}

}  // namespace occbench::occluder
