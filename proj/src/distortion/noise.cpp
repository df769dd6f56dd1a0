#include <cmath>

#include "families.hpp"
#include "iqa/color.hpp"
#include "iqa/parallel.hpp"
#include "iqa/rng.hpp"

namespace iqa::families {
namespace {

constexpr std::uint64_t kTagGaussian = 1;
constexpr std::uint64_t kTagYCbCr = 2;
constexpr std::uint64_t kTagSpeckle = 3;
constexpr std::uint64_t kTagCorrelated = 4;
constexpr std::uint64_t kTagPoisson = 5;
constexpr std::uint64_t kTagImpulse = 6;

// Applies fn(value, rng) to every channel value; the rng is keyed by the
// value's flat index so scheduling cannot change the result.
template <typename Fn>
ImageBuf per_value(const ImageBuf& img, std::uint64_t seed, std::uint64_t tag, unsigned threads, Fn&& fn,
                   bool clamp = true) {
  ImageBuf out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  const std::size_t row_len = static_cast<std::size_t>(img.width()) * 3;
  parallel_for(static_cast<std::size_t>(img.height()), threads, [&](std::size_t row) {
    for (std::size_t i = row * row_len; i < (row + 1) * row_len; ++i) {
      CounterRng rng(seed, {tag, i});
      dst[i] = fn(src[i], rng);
    }
  });
  if (clamp) out.clamp();
  return out;
}

}  // namespace

ImageBuf gaussian_noise_rgb(const ImageBuf& img, double sigma, std::uint64_t seed, unsigned threads) {
  return per_value(img, seed, kTagGaussian, threads,
                   [sigma](double v, CounterRng& rng) { return v + sigma * rng.normal(); });
}

ImageBuf gaussian_noise_ycbcr(const ImageBuf& img, double sigma_l, double sigma_r, double sigma_b,
                              std::uint64_t seed, unsigned threads) {
  // Chroma sigmas are given on the 8-bit scale.
  const double sr = sigma_r / 255.0;
  const double sb = sigma_b / 255.0;
  ImageBuf out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  const std::size_t w = static_cast<std::size_t>(img.width());
  parallel_for(static_cast<std::size_t>(img.height()), threads, [&](std::size_t row) {
    for (std::size_t p = row * w; p < (row + 1) * w; ++p) {
      const std::size_t i = p * 3;
      CounterRng rng(seed, {kTagYCbCr, p});
      auto ycc = rgb_to_ycbcr(Rgb{src[i], src[i + 1], src[i + 2]});
      ycc.y += sigma_l * rng.normal();
      ycc.cr += sr * rng.normal();
      ycc.cb += sb * rng.normal();
      const auto rgb = ycbcr_to_rgb(ycc);
      dst[i] = rgb.r;
      dst[i + 1] = rgb.g;
      dst[i + 2] = rgb.b;
    }
  });
  out.clamp();
  return out;
}

ImageBuf speckle_noise(const ImageBuf& img, double sigma, std::uint64_t seed, unsigned threads) {
  return per_value(img, seed, kTagSpeckle, threads,
                   [sigma](double v, CounterRng& rng) { return v * (1.0 + sigma * rng.normal()); });
}

ImageBuf correlated_noise(const ImageBuf& img, double sigma, int filter_size, std::uint64_t seed,
                          unsigned threads) {
  // The noisy intermediate stays unclamped: the average runs over I_R + N.
  const ImageBuf noisy = per_value(
      img, seed, kTagCorrelated, threads, [sigma](double v, CounterRng& rng) { return v + sigma * rng.normal(); },
      /*clamp=*/false);
  return convolve2d(noisy, Kernel::box(filter_size), threads);
}

ImageBuf poisson_noise(const ImageBuf& img, double interval, std::uint64_t seed, unsigned threads) {
  return per_value(img, seed, kTagPoisson, threads, [interval](double v, CounterRng& rng) {
    return static_cast<double>(rng.poisson(v * interval)) / interval;
  });
}

ImageBuf impulse_noise(const ImageBuf& img, double density, std::uint64_t seed, unsigned threads) {
  ImageBuf out = img;
  const std::size_t w = static_cast<std::size_t>(img.width());
  auto dst = out.pixels();
  parallel_for(static_cast<std::size_t>(img.height()), threads, [&](std::size_t row) {
    for (std::size_t p = row * w; p < (row + 1) * w; ++p) {
      CounterRng rng(seed, {kTagImpulse, p});
      if (!rng.bernoulli(density)) continue;
      const double v = rng.bernoulli(0.5) ? 1.0 : 0.0;
      dst[p * 3] = dst[p * 3 + 1] = dst[p * 3 + 2] = v;
    }
  });
  return out;
}

}  // namespace iqa::families
