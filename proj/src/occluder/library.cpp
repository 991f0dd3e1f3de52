#include "occluder/library.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "common/error.hpp"
#include "common/fileio.hpp"
#include "common/png_io.hpp"
#include "common/rng.hpp"

namespace fs = std::filesystem;

namespace occbench::occluder {
namespace {

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t parse_hex64(const std::string& s) {
  if (s.size() != 16) throw FormatError("content_hash must be 16 hex digits");
  return std::stoull(s, nullptr, 16);
}

}  // namespace

uint64_t silhouette_hash(const BinaryMask& mask, const RgbaImage& texture) {
  const int32_t dims[2] = {mask.width(), mask.height()};
  uint64_t h = fnv1a64(dims, sizeof dims);
  h = fnv1a64(mask.raw().data(), mask.raw().size(), h);
  h = fnv1a64(texture.bytes().data(), texture.bytes().size(), h);
  return h;
}

bool crop_silhouette(const RgbaImage& image, uint8_t alpha_threshold, BinaryMask& mask_out, RgbaImage& texture_out) {
  const BinaryMask full = extract_silhouette(image, alpha_threshold);
  int x0 = image.width(), y0 = image.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < full.height(); ++y)
    for (int x = 0; x < full.width(); ++x)
      if (full.get(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return false;
  const int w = x1 - x0 + 1, h = y1 - y0 + 1;
  mask_out = BinaryMask(w, h);
  texture_out = RgbaImage(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const bool on = full.get(x0 + x, y0 + y);
      mask_out.set(x, y, on);
      if (on) std::copy_n(image.at(x0 + x, y0 + y), 4, texture_out.at(x, y));
    }
  return true;
}

SilhouetteLibrary::SilhouetteLibrary(std::vector<Silhouette> items) : items_(std::move(items)) {
  hash_ = 0xcbf29ce484222325ULL;
  for (const auto& s : items_) hash_ = fnv1a64(&s.content_hash, sizeof s.content_hash, hash_);
}

SilhouetteLibrary SilhouetteLibrary::load(const fs::path& dir) {
  const fs::path manifest = dir / "library.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_text(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest.string() + ": " + e.what());
  }
  std::vector<Silhouette> items;
  try {
    for (const auto& e : j.at("silhouettes")) {
      Silhouette s;
      s.id = e.at("id").get<std::string>();
      s.source = e.value("source", "");
      s.mask = read_png_mask(dir / e.at("mask").get<std::string>());
      s.texture = read_png_rgba(dir / e.at("texture").get<std::string>());
      if (s.texture.width() != s.mask.width() || s.texture.height() != s.mask.height())
        throw FormatError("silhouette " + s.id + ": mask and texture sizes differ");
      s.content_hash = silhouette_hash(s.mask, s.texture);
      if (s.content_hash != parse_hex64(e.at("content_hash").get<std::string>()))
        throw FormatError("silhouette " + s.id + ": content hash mismatch");
      items.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest.string() + ": " + e.what());
  }
  if (items.empty()) throw ConfigError("silhouette library " + dir.string() + " is empty");
  return SilhouetteLibrary(std::move(items));
}

void SilhouetteLibrary::save(const fs::path& dir, uint8_t alpha_threshold) const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& s : items_) {
    const std::string mask_rel = "silhouettes/" + s.id + "_mask.png";
    const std::string tex_rel = "silhouettes/" + s.id + "_rgba.png";
    write_png(dir / mask_rel, s.mask);
    write_png(dir / tex_rel, s.texture);
    nlohmann::ordered_json e;
    e["id"] = s.id;
    e["source"] = s.source;
    e["mask"] = mask_rel;
    e["texture"] = tex_rel;
    e["width"] = s.mask.width();
    e["height"] = s.mask.height();
    e["coverage"] = s.mask.coverage();
    e["content_hash"] = hex64(s.content_hash);
    list.push_back(std::move(e));
  }
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["alpha_threshold"] = alpha_threshold;
  j["library_hash"] = hex64(hash_);
  j["silhouettes"] = std::move(list);
  write_file_atomic(dir / "library.json", j.dump(2) + "\n");
}

SilhouetteLibrary build_library(const fs::path& renders_dir, uint8_t alpha_threshold, BuildLibraryReport* report) {
  BuildLibraryReport local;
  BuildLibraryReport& rep = report ? *report : local;
  std::vector<Silhouette> items;
  for (const auto& path : list_files(renders_dir, {".png"})) {
    ++rep.renders;
    RgbaImage image;
    try {
      image = read_png_rgba(path);
    } catch (const Error& e) {
      ++rep.failed;
      rep.messages.push_back(std::string("unreadable render: ") + e.what());
      continue;
    }
    Silhouette s;
    if (!crop_silhouette(image, alpha_threshold, s.mask, s.texture)) {
      ++rep.skipped_empty;
      rep.messages.push_back("empty silhouette: " + path.filename().string());
      continue;
    }
    s.id = path.stem().string();
    s.source = path.filename().string();
    s.content_hash = silhouette_hash(s.mask, s.texture);
    items.push_back(std::move(s));
  }
  return SilhouetteLibrary(std::move(items));
}

}  // namespace occbench::occluder
