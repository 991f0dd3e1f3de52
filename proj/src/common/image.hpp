#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace occbench {

using Rgb = std::array<uint8_t, 3>;
using Rgba = std::array<uint8_t, 4>;

/// Row-major 8-bit image with a fixed channel count.
template <int Channels>
class Image {
public:
  static constexpr int kChannels = Channels;

  Image() = default;
  Image(int width, int height, uint8_t fill = 0);
  Image(int width, int height, std::vector<uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  size_t pixel_count() const { return static_cast<size_t>(width_) * height_; }

  std::span<uint8_t> data() { return pixels_; }
  std::span<const uint8_t> data() const { return pixels_; }
  const std::vector<uint8_t>& bytes() const { return pixels_; }

  uint8_t* at(int x, int y) { return pixels_.data() + index(x, y); }
  const uint8_t* at(int x, int y) const { return pixels_.data() + index(x, y); }

  friend bool operator==(const Image&, const Image&) = default;

private:
  size_t index(int x, int y) const { return (static_cast<size_t>(y) * width_ + x) * Channels; }

  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> pixels_;
};

using RgbaImage = Image<4>;
using RgbImage = Image<3>;

/// Row-major boolean mask. true marks occluder / foreground.
class BinaryMask {
public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return bits_.size(); }

  bool get(int x, int y) const { return bits_[static_cast<size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) { bits_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }
  bool operator[](size_t i) const { return bits_[i] != 0; }

  size_t popcount() const;
  double coverage() const;

  std::span<const uint8_t> raw() const { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> bits_;  // one byte per pixel, 0 or 1
};

/// Alpha > threshold.
BinaryMask extract_silhouette(const RgbaImage& image, uint8_t alpha_threshold = 127);

/// Number of pixels set in both masks. Dimensions must match.
size_t intersection_count(const BinaryMask& a, const BinaryMask& b);

}  // namespace occbench
