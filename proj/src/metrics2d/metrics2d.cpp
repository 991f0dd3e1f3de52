#include "metrics2d/metrics2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "common/error.hpp"

namespace occbench::metrics2d {
namespace {

void require_same_size(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InvalidArgument("image dimensions differ: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                          " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<size_t>(size));
  const double c = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    k[i] = std::exp(-((i - c) * (i - c)) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable 'valid' filtering of a single-channel plane.
std::vector<double> filter_valid(const std::vector<double>& in, int w, int h, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1, oh = h - n + 1;
  std::vector<double> tmp(static_cast<size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * in[static_cast<size_t>(y) * w + x + i];
      tmp[static_cast<size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * tmp[static_cast<size_t>(y + i) * ow + x];
      out[static_cast<size_t>(y) * ow + x] = s;
    }
  return out;
}

}  // namespace

RgbImage composite_background(const RgbaImage& image, Rgb background) {
  RgbImage out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const uint8_t* s = image.at(x, y);
      uint8_t* d = out.at(x, y);
      const unsigned a = s[3];
      for (int c = 0; c < 3; ++c) {
        // round((a*fg + (255-a)*bg) / 255) with halves rounded up, in integers
        const unsigned num = a * s[c] + (255u - a) * background[c];
        d[c] = static_cast<uint8_t>((2u * num + 255u) / 510u);
      }
    }
  return out;
}

Rgb parse_background(const std::string& text) {
  if (text == "white") return {255, 255, 255};
  if (text == "black") return {0, 0, 0};
  if (text.rfind("rgb:", 0) == 0) {
    int r, g, b;
    char tail;
    if (std::sscanf(text.c_str() + 4, "%d,%d,%d%c", &r, &g, &b, &tail) == 3 && r >= 0 && r <= 255 && g >= 0 &&
        g <= 255 && b >= 0 && b <= 255)
      return {static_cast<uint8_t>(r), static_cast<uint8_t>(g), static_cast<uint8_t>(b)};
  }
  throw InvalidArgument("bad background '" + text + "' (expected white, black or rgb:r,g,b)");
}

double psnr(const RgbImage& a, const RgbImage& b, double max_value) {
  require_same_size(a, b);
  if (a.empty()) throw InvalidArgument("psnr of empty images");
  double sum = 0.0;
  const auto da = a.data(), db = b.data();
  for (size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sum += d * d;
  }
  if (sum == 0.0) return kPsnrIdentical;
  const double mse = sum / static_cast<double>(da.size());
  return 10.0 * std::log10(max_value * max_value / mse);
}

double ssim(const RgbImage& a, const RgbImage& b, const SsimParams& params) {
  require_same_size(a, b);
  if (a.width() < params.window || a.height() < params.window)
    throw InvalidArgument("image smaller than the " + std::to_string(params.window) + "px SSIM window");
  const int w = a.width(), h = a.height();
  const size_t n = static_cast<size_t>(w) * h;
  const auto kernel = gaussian_kernel(params.window, params.sigma);
  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

  double total = 0.0;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (int c = 0; c < 3; ++c) {
    for (size_t i = 0; i < n; ++i) {
      x[i] = a.data()[i * 3 + c];
      y[i] = b.data()[i * 3 + c];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h, kernel);
    const auto my = filter_valid(y, w, h, kernel);
    const auto mxx = filter_valid(xx, w, h, kernel);
    const auto myy = filter_valid(yy, w, h, kernel);
    const auto mxy = filter_valid(xy, w, h, kernel);
    double sum = 0.0;
    for (size_t i = 0; i < mx.size(); ++i) {
      const double vx = mxx[i] - mx[i] * mx[i];
      const double vy = myy[i] - my[i] * my[i];
      const double cov = mxy[i] - mx[i] * my[i];
      sum += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    total += sum / static_cast<double>(mx.size());
  }
  return std::clamp(total / 3.0, -1.0, 1.0);
}

}  // namespace occbench::metrics2d
