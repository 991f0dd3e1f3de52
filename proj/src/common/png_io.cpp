#include "common/png_io.hpp"

#include <png.h>

#include <cstring>
#include <vector>

#include "common/error.hpp"
#include "common/fileio.hpp"

namespace occbench {
namespace {

std::vector<uint8_t> decode(const std::filesystem::path& path, uint32_t format, int& w, int& h) {
  std::vector<uint8_t> file = read_file_bytes(path);
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, file.data(), file.size()))
    throw FormatError(path.string() + ": not a PNG (" + img.message + ")");
  img.format = format;
  std::vector<uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError(path.string() + ": " + msg);
  }
  w = static_cast<int>(img.width);
  h = static_cast<int>(img.height);
  return buffer;
}

void encode(const std::filesystem::path& path, const uint8_t* pixels, int w, int h, uint32_t format) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels, 0, nullptr))
    throw IoError(path.string() + ": png sizing failed (" + img.message + ")");
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, 0, nullptr))
    throw IoError(path.string() + ": png encode failed (" + img.message + ")");
  out.resize(size);
  write_file_atomic(path, out);
}

}  // namespace

RgbaImage read_png_rgba(const std::filesystem::path& path) {
  int w = 0, h = 0;
  auto buf = decode(path, PNG_FORMAT_RGBA, w, h);
  return RgbaImage(w, h, std::move(buf));
}

BinaryMask read_png_mask(const std::filesystem::path& path) {
  int w = 0, h = 0;
  auto buf = decode(path, PNG_FORMAT_GRAY, w, h);
  BinaryMask mask(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) mask.set(x, y, buf[static_cast<size_t>(y) * w + x] != 0);
  return mask;
}

void write_png(const std::filesystem::path& path, const RgbaImage& image) {
  encode(path, image.bytes().data(), image.width(), image.height(), PNG_FORMAT_RGBA);
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  encode(path, image.bytes().data(), image.width(), image.height(), PNG_FORMAT_RGB);
}

void write_png(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<uint8_t> gray(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) gray[i] = mask[i] ? 255 : 0;
  encode(path, gray.data(), mask.width(), mask.height(), PNG_FORMAT_GRAY);
}

}  // namespace occbench
