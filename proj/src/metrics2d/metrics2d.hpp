#pragma once

#include <limits>
#include <string>

#include "common/image.hpp"

namespace occbench::metrics2d {

/// PSNR of identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// out = a*fg + (1-a)*bg per channel, a = alpha/255, rounded half up.
RgbImage composite_background(const RgbaImage& image, Rgb background);

/// Parses "white", "black" or "rgb:r,g,b".
Rgb parse_background(const std::string& text);

/// 10*log10(max^2 / MSE) over all channels; kPsnrIdentical when MSE is 0.
/// Throws InvalidArgument on a dimension mismatch.
double psnr(const RgbImage& a, const RgbImage& b, double max_value = 255.0);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

/// Mean local SSIM over all fully-covered window positions, per channel,
/// averaged across channels. Throws InvalidArgument when sizes differ or the
/// image is smaller than the window.
double ssim(const RgbImage& a, const RgbImage& b, const SsimParams& params = {});

}  // namespace occbench::metrics2d
