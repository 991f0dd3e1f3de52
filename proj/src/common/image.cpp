#include "common/image.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace occbench {

template <int C>
Image<C>::Image(int width, int height, uint8_t fill)
    : width_(width), height_(height), pixels_(static_cast<size_t>(width) * height * C, fill) {
  if (width < 0 || height < 0) throw InvalidArgument("image dimensions must be non-negative");
}

template <int C>
Image<C>::Image(int width, int height, std::vector<uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0) throw InvalidArgument("image dimensions must be non-negative");
  if (pixels_.size() != static_cast<size_t>(width) * height * C)
    throw InvalidArgument("pixel buffer length does not match image dimensions");
}

template class Image<3>;
template class Image<4>;

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), bits_(static_cast<size_t>(width) * height, fill ? 1 : 0) {
  if (width < 0 || height < 0) throw InvalidArgument("mask dimensions must be non-negative");
}

size_t BinaryMask::popcount() const {
  return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), uint8_t{1}));
}

double BinaryMask::coverage() const {
  if (bits_.empty()) return 0.0;
  return static_cast<double>(popcount()) / static_cast<double>(bits_.size());
}

BinaryMask extract_silhouette(const RgbaImage& image, uint8_t alpha_threshold) {
  BinaryMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) mask.set(x, y, image.at(x, y)[3] > alpha_threshold);
  return mask;
}

size_t intersection_count(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InvalidArgument("mask dimensions differ");
  size_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += (a[i] && b[i]) ? 1 : 0;
  return n;
}

}  // namespace occbench
