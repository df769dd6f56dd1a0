#include <algorithm>
#include <array>
#include <cmath>

#include "families.hpp"
#include "iqa/color.hpp"

namespace iqa::families {
namespace {

template <typename Fn>
ImageBuf map_values(const ImageBuf& img, Fn&& fn) {
  ImageBuf out = img;
  for (double& v : out.pixels()) v = fn(v);
  out.clamp();
  return out;
}

template <typename Fn>
ImageBuf map_hsv(const ImageBuf& img, Fn&& fn) {
  ImageBuf out = img;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    Hsv hsv = rgb_to_hsv(Rgb{px[i], px[i + 1], px[i + 2]});
    fn(hsv);
    hsv.s = std::clamp(hsv.s, 0.0, 1.0);
    hsv.v = std::clamp(hsv.v, 0.0, 1.0);
    const Rgb rgb = hsv_to_rgb(hsv);
    px[i] = rgb.r;
    px[i + 1] = rgb.g;
    px[i + 2] = rgb.b;
  }
  out.clamp();
  return out;
}

}  // namespace

ImageBuf shift_hsv_value(const ImageBuf& img, double delta) {
  return map_hsv(img, [delta](Hsv& p) { p.v += delta; });
}

ImageBuf shift_rgb(const ImageBuf& img, double delta) {
  return map_values(img, [delta](double v) { return v + delta; });
}

ImageBuf gamma_hsv_value(const ImageBuf& img, double gamma) {
  return map_hsv(img, [gamma](Hsv& p) { p.v = std::pow(p.v, gamma); });
}

ImageBuf gamma_rgb(const ImageBuf& img, double gamma) {
  return map_values(img, [gamma](double v) { return std::pow(v, gamma); });
}

ImageBuf contrast_scale(const ImageBuf& img, double alpha) {
  // I_mean is one gray level: the mean over every pixel and channel.
  double sum = 0.0;
  for (double v : img.pixels()) sum += v;
  const double mean = sum / static_cast<double>(img.size());
  return map_values(img, [mean, alpha](double v) { return mean * (1.0 - alpha) + v * alpha; });
}

ImageBuf contrast_stretch(const ImageBuf& img, double alpha, double epsilon) {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) mean[i % 3] += src[i];
  for (double& m : mean) m /= static_cast<double>(img.pixel_count());
  ImageBuf out = img;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = 1.0 / (1.0 + std::pow(mean[i % 3] / (px[i] + epsilon), alpha));
  }
  out.clamp();
  return out;
}

ImageBuf saturate_hsv(const ImageBuf& img, double scale) {
  return map_hsv(img, [scale](Hsv& p) { p.s *= scale; });
}

ImageBuf saturate_ycbcr(const ImageBuf& img, double scale) {
  ImageBuf out = img;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    YCbCr ycc = rgb_to_ycbcr(Rgb{px[i], px[i + 1], px[i + 2]});
    ycc.cb = 0.5 + (ycc.cb - 0.5) * scale;
    ycc.cr = 0.5 + (ycc.cr - 0.5) * scale;
    const Rgb rgb = ycbcr_to_rgb(ycc);
    px[i] = rgb.r;
    px[i + 1] = rgb.g;
    px[i + 2] = rgb.b;
  }
  out.clamp();
  return out;
}

}  // namespace iqa::families
