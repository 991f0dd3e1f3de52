#pragma once

#include <filesystem>

#include "common/image.hpp"

namespace occbench {

/// Decodes any PNG into 8-bit RGBA. Throws IoError / FormatError.
RgbaImage read_png_rgba(const std::filesystem::path& path);

/// Single-channel PNG; nonzero samples become true.
BinaryMask read_png_mask(const std::filesystem::path& path);

/// Encoders are deterministic: identical pixels always give identical bytes.
/// Files are written via temp file + rename.
void write_png(const std::filesystem::path& path, const RgbaImage& image);
void write_png(const std::filesystem::path& path, const RgbImage& image);
/// Writes {0,255} grayscale.
void write_png(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace occbench
