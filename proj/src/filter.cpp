#include "iqa/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iqa/parallel.hpp"

namespace iqa {
namespace {

struct Tap {
  int offset;
  double weight;
};

struct Tap2 {
  int dx;
  int dy;
  double weight;
};

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// One output sample of a separable resampler: source indices and weights.
struct AxisWeights {
  std::vector<std::vector<Tap>> per_output;
};

double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return (((t - 5.0) * t + 8.0) * t - 4.0) * a;
  return 0.0;
}

AxisWeights axis_weights(int src, int dst, ResampleMode mode) {
  AxisWeights w;
  w.per_output.resize(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    auto& taps = w.per_output[i];
    switch (mode) {
      case ResampleMode::Box: {
        const double lo = i * scale;
        const double hi = (i + 1) * scale;
        const int k0 = static_cast<int>(std::floor(lo));
        const int k1 = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
        for (int k = k0; k <= k1; ++k) {
          const double overlap = std::min<double>(k + 1, hi) - std::max<double>(k, lo);
          if (overlap > 0.0) taps.push_back({k, overlap / scale});
        }
        break;
      }
      case ResampleMode::Nearest: {
        const int k = std::min(src - 1, static_cast<int>(std::floor((i + 0.5) * scale)));
        taps.push_back({k, 1.0});
        break;
      }
      case ResampleMode::Bilinear: {
        const double t = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(src - 1));
        const int k = static_cast<int>(std::floor(t));
        const double f = t - k;
        taps.push_back({k, 1.0 - f});
        if (f > 0.0) taps.push_back({clamp_index(k + 1, src), f});
        break;
      }
      case ResampleMode::Bicubic: {
        const double t = (i + 0.5) * scale - 0.5;
        const int k = static_cast<int>(std::floor(t));
        for (int j = k - 1; j <= k + 2; ++j) {
          const double wt = cubic_weight(t - j);
          if (wt != 0.0) taps.push_back({clamp_index(j, src), wt});
        }
        break;
      }
    }
    // Renormalize so DC is preserved exactly regardless of edge clamping.
    double total = 0.0;
    for (const auto& tap : taps) total += tap.weight;
    if (total != 0.0 && total != 1.0) {
      for (auto& tap : taps) tap.weight /= total;
    }
  }
  return w;
}

}  // namespace

Kernel::Kernel(int width, int height, std::vector<double> taps)
    : width_(width), height_(height), taps_(std::move(taps)) {
  if (width < 1 || height < 1 || taps_.size() != static_cast<std::size_t>(width) * height) {
    throw ImageError("kernel taps do not match its dimensions");
  }
}

Kernel::Kernel(int width, int height, double fill)
    : Kernel(width, height,
             std::vector<double>(static_cast<std::size_t>(std::max(width, 1)) * std::max(height, 1),
                                 fill)) {}

Kernel Kernel::box(int size) {
  return Kernel(size, size, 1.0 / (static_cast<double>(size) * size));
}

double Kernel::sum() const { return std::accumulate(taps_.begin(), taps_.end(), 0.0); }

void Kernel::normalize() {
  const double s = sum();
  if (s == 0.0) return;
  for (double& t : taps_) t /= s;
}

ImageBuf convolve2d(const ImageBuf& img, const Kernel& kernel, unsigned threads) {
  if (kernel.width() % 2 == 0 || kernel.height() % 2 == 0) {
    throw ImageError("convolve2d: kernel dimensions must be odd, got " +
                     std::to_string(kernel.width()) + "x" + std::to_string(kernel.height()));
  }
  const int rx = kernel.width() / 2;
  const int ry = kernel.height() / 2;
  std::vector<Tap2> taps;
  for (int y = 0; y < kernel.height(); ++y) {
    for (int x = 0; x < kernel.width(); ++x) {
      if (kernel.at(x, y) != 0.0) taps.push_back({x - rx, y - ry, kernel.at(x, y)});
    }
  }
  const int w = img.width();
  const int h = img.height();
  ImageBuf out(w, h);
  auto src = img.pixels();
  auto dst = out.pixels();
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (const auto& t : taps) {
        const int sx = clamp_index(x + t.dx, w);
        const int sy = clamp_index(y + t.dy, h);
        const std::size_t base = (static_cast<std::size_t>(sy) * w + sx) * 3;
        acc[0] += t.weight * src[base];
        acc[1] += t.weight * src[base + 1];
        acc[2] += t.weight * src[base + 2];
      }
      const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
      dst[o] = acc[0];
      dst[o + 1] = acc[1];
      dst[o + 2] = acc[2];
    }
  });
  out.clamp();
  return out;
}

ImageBuf convolve_separable(const ImageBuf& img, std::span<const double> kx,
                            std::span<const double> ky, unsigned threads) {
  if (kx.size() % 2 == 0 || ky.size() % 2 == 0) {
    throw ImageError("convolve_separable: kernel lengths must be odd");
  }
  const int w = img.width();
  const int h = img.height();
  const int rx = static_cast<int>(kx.size() / 2);
  const int ry = static_cast<int>(ky.size() / 2);
  std::vector<double> tmp(img.size());
  auto src = img.pixels();
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const std::size_t rbase = row * w;
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = 0; k < static_cast<int>(kx.size()); ++k) {
        const std::size_t b = (rbase + clamp_index(x + k - rx, w)) * 3;
        acc[0] += kx[k] * src[b];
        acc[1] += kx[k] * src[b + 1];
        acc[2] += kx[k] * src[b + 2];
      }
      const std::size_t o = (rbase + x) * 3;
      tmp[o] = acc[0];
      tmp[o + 1] = acc[1];
      tmp[o + 2] = acc[2];
    }
  });
  ImageBuf out(w, h);
  auto dst = out.pixels();
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int k = 0; k < static_cast<int>(ky.size()); ++k) {
        const std::size_t b = (static_cast<std::size_t>(clamp_index(y + k - ry, h)) * w + x) * 3;
        acc[0] += ky[k] * tmp[b];
        acc[1] += ky[k] * tmp[b + 1];
        acc[2] += ky[k] * tmp[b + 2];
      }
      const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
      dst[o] = acc[0];
      dst[o + 1] = acc[1];
      dst[o + 2] = acc[2];
    }
  });
  out.clamp();
  return out;
}

std::vector<double> gaussian_kernel_1d(double sigma, int size) {
  if (size < 1 || size % 2 == 0) throw ImageError("gaussian kernel size must be odd");
  std::vector<double> k(size);
  const int r = size / 2;
  if (sigma <= 0.0) {
    std::fill(k.begin(), k.end(), 0.0);
    k[r] = 1.0;
    return k;
  }
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - r;
    k[i] = std::exp(-0.5 * d * d / (sigma * sigma));
    total += k[i];
  }
  for (double& v : k) v /= total;
  return k;
}

int gaussian_kernel_size(double sigma) {
  int size = static_cast<int>(std::lround(4.0 * sigma)) + 1;
  if (size % 2 == 0) ++size;
  return size;
}

ImageBuf gaussian_blur(const ImageBuf& img, double sigma, int size, unsigned threads) {
  const auto k = gaussian_kernel_1d(sigma, size);
  return convolve_separable(img, k, k, threads);
}

ImageBuf resample(const ImageBuf& img, int new_width, int new_height, ResampleMode mode) {
  if (new_width < 1 || new_height < 1) throw ImageError("resample: target size must be positive");
  if (new_width == img.width() && new_height == img.height()) return img;
  const auto wx = axis_weights(img.width(), new_width, mode);
  const auto wy = axis_weights(img.height(), new_height, mode);

  const int h = img.height();
  std::vector<double> tmp(static_cast<std::size_t>(new_width) * h * 3);
  auto src = img.pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < new_width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (const auto& t : wx.per_output[x]) {
        const std::size_t b = (static_cast<std::size_t>(y) * img.width() + t.offset) * 3;
        for (int c = 0; c < 3; ++c) acc[c] += t.weight * src[b + c];
      }
      const std::size_t o = (static_cast<std::size_t>(y) * new_width + x) * 3;
      for (int c = 0; c < 3; ++c) tmp[o + c] = acc[c];
    }
  }
  ImageBuf out(new_width, new_height);
  auto dst = out.pixels();
  for (int y = 0; y < new_height; ++y) {
    for (int x = 0; x < new_width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (const auto& t : wy.per_output[y]) {
        const std::size_t b = (static_cast<std::size_t>(t.offset) * new_width + x) * 3;
        for (int c = 0; c < 3; ++c) acc[c] += t.weight * tmp[b + c];
      }
      const std::size_t o = (static_cast<std::size_t>(y) * new_width + x) * 3;
      for (int c = 0; c < 3; ++c) dst[o + c] = acc[c];
    }
  }
  out.clamp();
  return out;
}

double sample_bilinear(const ImageBuf& img, double x, double y, int c) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
  const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

}  // namespace iqa
