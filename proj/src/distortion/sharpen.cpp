#include <algorithm>
#include <cmath>

#include "families.hpp"

namespace iqa::families {

ImageBuf over_sharpen(const ImageBuf& img, double alpha, double blur_sigma, int kernel_size, unsigned threads) {
  const ImageBuf blurred = gaussian(img, blur_sigma, kernel_size, threads);
  ImageBuf out = img;
  auto px = out.pixels();
  auto bl = blurred.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = px[i] * (1.0 + alpha) - bl[i] * alpha;
  out.clamp();
  return out;
}

ImageBuf pixelate(const ImageBuf& img, double factor) {
  const int w = std::max(1, static_cast<int>(std::lround(img.width() * factor)));
  const int h = std::max(1, static_cast<int>(std::lround(img.height() * factor)));
  const ImageBuf small = resample(img, w, h, ResampleMode::Box);
  return resample(small, img.width(), img.height(), ResampleMode::Nearest);
}

}  // namespace iqa::families
