#include <algorithm>
#include <cmath>
#include <numbers>

#include "families.hpp"
#include "iqa/parallel.hpp"
#include "iqa/rng.hpp"

namespace iqa::families {
namespace {

// Draw-index tags keep the streams of different families disjoint even when
// callers reuse one seed.
constexpr std::uint64_t kTagMotionAngle = 0x6d6f74696f6eULL;
constexpr std::uint64_t kTagGlass = 0x676c617373ULL;
constexpr std::uint64_t kTagJitter = 0x6a6974746572ULL;

// Moves every pixel to a random neighbour within [-max_shift, max_shift]^2.
// Reads come from `src`, so the result is independent of visiting order.
void displace(const ImageBuf& src, ImageBuf& dst, int max_shift, std::uint64_t seed, std::uint64_t draw,
              unsigned threads) {
  const int w = src.width();
  const int h = src.height();
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const std::uint64_t pixel = static_cast<std::uint64_t>(y) * w + x;
      CounterRng rng(seed, {pixel, draw});
      const int dx = static_cast<int>(rng.range(-max_shift, max_shift));
      const int dy = static_cast<int>(rng.range(-max_shift, max_shift));
      const int sx = std::clamp(x + dx, 0, w - 1);
      const int sy = std::clamp(y + dy, 0, h - 1);
      for (int c = 0; c < 3; ++c) dst.at(x, y, c) = src.at(sx, sy, c);
    }
  });
}

}  // namespace

ImageBuf gaussian(const ImageBuf& img, double sigma, int kernel_size, unsigned threads) {
  if (kernel_size % 2 == 0) ++kernel_size;
  return gaussian_blur(img, sigma, kernel_size, threads);
}

Kernel motion_kernel(double radius, double sigma, double angle) {
  const int length = std::max(1, static_cast<int>(std::lround(radius)));
  const int half = length;
  Kernel k(2 * half + 1, 2 * half + 1, 0.0);
  const double cx = std::cos(angle);
  const double sy = std::sin(angle);
  // One-sided streak from the centre, Gaussian-weighted along its length and
  // splatted bilinearly onto the grid.
  for (int t = 0; t < length; ++t) {
    const double weight = std::exp(-0.5 * t * t / (sigma * sigma));
    const double px = half + t * cx;
    const double py = half + t * sy;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    const auto splat = [&](int x, int y, double wgt) {
      if (wgt <= 0.0 || x < 0 || y < 0 || x >= k.width() || y >= k.height()) return;
      k.at(x, y) += wgt;
    };
    splat(x0, y0, weight * (1 - fx) * (1 - fy));
    splat(x0 + 1, y0, weight * fx * (1 - fy));
    splat(x0, y0 + 1, weight * (1 - fx) * fy);
    splat(x0 + 1, y0 + 1, weight * fx * fy);
  }
  k.normalize();
  return k;
}

ImageBuf motion(const ImageBuf& img, double radius, double sigma, std::uint64_t seed, unsigned threads) {
  CounterRng rng(seed, {kTagMotionAngle});
  const double angle = rng.uniform() * std::numbers::pi;
  return convolve2d(img, motion_kernel(radius, sigma, angle), threads);
}

ImageBuf glass(const ImageBuf& img, double sigma, int max_shift, int iterations, std::uint64_t seed,
               unsigned threads) {
  const int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
  ImageBuf cur = gaussian_blur(img, sigma, size, threads);
  ImageBuf next(cur.width(), cur.height());
  for (int it = 0; it < iterations; ++it) {
    displace(cur, next, max_shift, seed, hash_combine(kTagGlass, static_cast<std::uint64_t>(it)), threads);
    std::swap(cur, next);
  }
  return cur;
}

Kernel disk_kernel(int radius) {
  const int size = 2 * radius + 1;
  Kernel k(size, size, 0.0);
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      if (x * x + y * y <= radius * radius) k.at(x + radius, y + radius) = 1.0;
    }
  }
  k.normalize();
  return k;
}

ImageBuf lens(const ImageBuf& img, int radius, unsigned threads) {
  return convolve2d(img, disk_kernel(radius), threads);
}

ImageBuf zoom(const ImageBuf& img, double max_zoom, int steps, unsigned threads) {
  const int w = img.width();
  const int h = img.height();
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  std::vector<double> acc(img.pixels().begin(), img.pixels().end());
  for (int s = 1; s <= steps; ++s) {
    const double z = 1.0 + (max_zoom - 1.0) * s / steps;
    parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t row) {
      const int y = static_cast<int>(row);
      const double sy = cy + (y - cy) / z;
      for (int x = 0; x < w; ++x) {
        const double sx = cx + (x - cx) / z;
        const std::size_t o = img.index(x, y, 0);
        for (int c = 0; c < 3; ++c) acc[o + c] += sample_bilinear(img, sx, sy, c);
      }
    });
  }
  ImageBuf out(w, h);
  auto px = out.pixels();
  for (std::size_t i = 0; i < acc.size(); ++i) px[i] = acc[i] / (steps + 1);
  out.clamp();
  return out;
}

ImageBuf jitter(const ImageBuf& img, int max_shift, int copies, std::uint64_t seed, unsigned threads) {
  std::vector<double> acc(img.size(), 0.0);
  ImageBuf moved(img.width(), img.height());
  for (int k = 0; k < copies; ++k) {
    displace(img, moved, max_shift, seed, hash_combine(kTagJitter, static_cast<std::uint64_t>(k)), threads);
    auto px = moved.pixels();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += px[i];
  }
  ImageBuf out(img.width(), img.height());
  auto px = out.pixels();
  for (std::size_t i = 0; i < acc.size(); ++i) px[i] = acc[i] / copies;
  out.clamp();
  return out;
}

}  // namespace iqa::families
