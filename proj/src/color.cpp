#include "iqa/color.hpp"

#include <algorithm>
#include <cmath>

namespace iqa {
namespace {

constexpr double kKr = 0.299;
constexpr double kKb = 0.114;
constexpr double kKg = 1.0 - kKr - kKb;

template <typename Fn>
ImageBuf map_pixels(const ImageBuf& src, Fn&& fn) {
  ImageBuf out(src.width(), src.height());
  auto in = src.pixels();
  auto px = out.pixels();
  for (std::size_t i = 0; i < in.size(); i += 3) {
    auto [a, b, c] = fn(in[i], in[i + 1], in[i + 2]);
    px[i] = a;
    px[i + 1] = b;
    px[i + 2] = c;
  }
  out.clamp();
  return out;
}

}  // namespace

Hsv rgb_to_hsv(Rgb p) {
  const double mx = std::max({p.r, p.g, p.b});
  const double mn = std::min({p.r, p.g, p.b});
  const double delta = mx - mn;
  Hsv out{0.0, mx > 0.0 ? delta / mx : 0.0, mx};
  if (delta <= 0.0) return out;
  double h;
  if (mx == p.r) {
    h = (p.g - p.b) / delta;
  } else if (mx == p.g) {
    h = (p.b - p.r) / delta + 2.0;
  } else {
    h = (p.r - p.g) / delta + 4.0;
  }
  h /= 6.0;
  if (h < 0.0) h += 1.0;
  if (h >= 1.0) h -= 1.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(Hsv p) {
  const double h6 = (p.h - std::floor(p.h)) * 6.0;
  const int sector = static_cast<int>(h6) % 6;
  const double f = h6 - std::floor(h6);
  const double v = p.v;
  const double a = v * (1.0 - p.s);
  const double b = v * (1.0 - p.s * f);
  const double c = v * (1.0 - p.s * (1.0 - f));
  switch (sector) {
    case 0: return {v, c, a};
    case 1: return {b, v, a};
    case 2: return {a, v, c};
    case 3: return {a, b, v};
    case 4: return {c, a, v};
    default: return {v, a, b};
  }
}

YCbCr rgb_to_ycbcr(Rgb p) {
  const double y = kKr * p.r + kKg * p.g + kKb * p.b;
  return {y, 0.5 + (p.b - y) / (2.0 * (1.0 - kKb)), 0.5 + (p.r - y) / (2.0 * (1.0 - kKr))};
}

Rgb ycbcr_to_rgb(YCbCr p) {
  const double r = p.y + 2.0 * (1.0 - kKr) * (p.cr - 0.5);
  const double b = p.y + 2.0 * (1.0 - kKb) * (p.cb - 0.5);
  const double g = (p.y - kKr * r - kKb * b) / kKg;
  return {r, g, b};
}

ImageBuf rgb_to_hsv(const ImageBuf& rgb) {
  return map_pixels(rgb, [](double r, double g, double b) {
    auto [h, s, v] = rgb_to_hsv(Rgb{r, g, b});
    return Hsv{h, s, v};
  });
}

ImageBuf hsv_to_rgb(const ImageBuf& hsv) {
  return map_pixels(hsv, [](double h, double s, double v) { return hsv_to_rgb(Hsv{h, s, v}); });
}

ImageBuf rgb_to_ycbcr(const ImageBuf& rgb) {
  return map_pixels(rgb, [](double r, double g, double b) { return rgb_to_ycbcr(Rgb{r, g, b}); });
}

ImageBuf ycbcr_to_rgb(const ImageBuf& ycc) {
  return map_pixels(ycc, [](double y, double cb, double cr) { return ycbcr_to_rgb(YCbCr{y, cb, cr}); });
}

}  // namespace iqa
