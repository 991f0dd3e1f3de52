#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "common/image.hpp"

namespace occbench::occluder {

/// One occluder shape: a tight-cropped silhouette plus the donor's RGBA
/// pixels over the same crop (used by the texture fill policy).
struct Silhouette {
  std::string id;
  std::string source;
  BinaryMask mask;
  RgbaImage texture;
  uint64_t content_hash = 0;
};

uint64_t silhouette_hash(const BinaryMask& mask, const RgbaImage& texture);

/// Crops image and its silhouette to the silhouette's bounding box. Returns
/// false when the silhouette is empty.
bool crop_silhouette(const RgbaImage& image, uint8_t alpha_threshold, BinaryMask& mask_out, RgbaImage& texture_out);

/// Read-only after construction.
class SilhouetteLibrary {
public:
  SilhouetteLibrary() = default;
  explicit SilhouetteLibrary(std::vector<Silhouette> items);

  const std::vector<Silhouette>& items() const { return items_; }
  const Silhouette& operator[](size_t i) const { return items_[i]; }
  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  /// Order-sensitive hash over the per-silhouette content hashes.
  uint64_t content_hash() const { return hash_; }

  /// Loads <dir>/library.json and the referenced PNGs, verifying hashes.
  static SilhouetteLibrary load(const std::filesystem::path& dir);

  /// Writes masks, textures and library.json into dir.
  void save(const std::filesystem::path& dir, uint8_t alpha_threshold) const;

private:
  std::vector<Silhouette> items_;
  uint64_t hash_ = 0;
};

struct BuildLibraryReport {
  size_t renders = 0;
  size_t skipped_empty = 0;
  size_t failed = 0;
  std::vector<std::string> messages;
};

/// Extracts one silhouette per PNG in renders_dir (sorted by name). Empty or
/// unreadable renders are skipped and reported.
SilhouetteLibrary build_library(const std::filesystem::path& renders_dir, uint8_t alpha_threshold,
                                BuildLibraryReport* report = nullptr);

}  // namespace occbench::occluder
