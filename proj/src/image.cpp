#include "iqa/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iqa {

ImageBuf::ImageBuf(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ImageError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  pixels_.assign(static_cast<std::size_t>(width) * height * kChannels, std::clamp(fill, 0.0, 1.0));
}

ImageBuf ImageBuf::from_pixels(int width, int height, std::vector<double> pixels) {
  ImageBuf img(width, height);
  if (pixels.size() != img.pixels_.size()) {
    throw ImageError("pixel buffer holds " + std::to_string(pixels.size()) + " values, expected " +
                     std::to_string(img.pixels_.size()));
  }
  for (double v : pixels) {
    if (!(v >= 0.0 && v <= 1.0)) throw ImageError("pixel value outside [0,1]");
  }
  img.pixels_ = std::move(pixels);
  return img;
}

void ImageBuf::clamp() {
  for (double& v : pixels_) {
    v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  }
}

double mean_squared_error(const ImageBuf& a, const ImageBuf& b) {
  if (!a.same_shape(b)) {
    throw ImageError("psnr: dimension mismatch " + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  }
  auto pa = a.pixels();
  auto pb = b.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pa.size());
}

double psnr(const ImageBuf& a, const ImageBuf& b) {
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace iqa
